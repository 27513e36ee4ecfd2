"""Particle-number sweeps, the S = a + b ln N fit, and the bound audit."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .entropy import EntropyReport, entropy_report
from .gpe import (
    DEFAULT_GRID_POINTS,
    CondensateState,
    SolverError,
    TrapSpec,
    default_grid,
    solve_ground_state,
)
from .momentum import DensityPair, to_momentum
from .radial import RadialGrid

log = logging.getLogger(__name__)

# Default sweep: the particle numbers of the published bosonic table.
TABLE_N_VALUES = (500, 1_000, 3_000, 5_000, 7_000, 10_000, 50_000, 100_000, 500_000, 1_000_000)
AUDIT_TOL = 1e-6


class SweepError(RuntimeError):
    """A solve failed mid-sweep; completed entries are kept on the exception."""

    def __init__(self, n_particles: int, partial: list, cause: Exception):
        super().__init__(f"sweep failed at N={n_particles}: {cause}")
        self.n_particles = n_particles
        self.partial = partial
        self.cause = cause


class SweepEntry(NamedTuple):
    n_particles: int
    report: EntropyReport


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[SweepEntry, ...]
    spec: TrapSpec
    grid_points: int
    r_max: float | None = None
    densities: dict = field(default_factory=dict, repr=False, compare=False)
    states: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        ns = [e.n_particles for e in self.entries]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError(f"sweep entries must have strictly increasing N, got {ns}")

    @property
    def n_values(self) -> list[int]:
        return [e.n_particles for e in self.entries]

    @property
    def reports(self) -> list[EntropyReport]:
        return [e.report for e in self.entries]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(e.report, name) for e in self.entries])


def analyse(
    spec: TrapSpec,
    grid: RadialGrid | None = None,
    tol: float = 1e-9,
) -> tuple[CondensateState, DensityPair, EntropyReport]:
    """Solve, transform and evaluate one system."""
    state = solve_ground_state(spec, grid, tol)
    pair = to_momentum(state.psi)
    return state, pair, entropy_report(pair, spec.n_particles)


def _grid_for(spec: TrapSpec, grid_points: int, r_max: float | None) -> RadialGrid:
    if r_max is None:
        return default_grid(spec, grid_points)
    return RadialGrid(r_max, grid_points)


def _analyse_n(args):
    spec, grid_points, r_max, tol = args
    return analyse(spec, _grid_for(spec, grid_points, r_max), tol)


def run_sweep(
    spec_template: TrapSpec,
    n_values: Sequence[int] = TABLE_N_VALUES,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    r_max: float | None = None,
    tol: float = 1e-9,
    workers: int = 1,
) -> SweepResult:
    """Analyse every N in ``n_values`` (strictly increasing) with ``spec_template``'s lengths.

    ``r_max=None`` sizes the box per N from the Thomas-Fermi radius. With
    ``workers > 1`` the solves run in separate processes; results are always
    assembled in the order of ``n_values``.
    """
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ValueError("n_values is empty")
    if min(n_values) < 1:
        raise ValueError(f"every N must be >= 1, got {n_values}")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError(f"n_values must be strictly increasing, got {n_values}")

    specs = [spec_template.with_particles(n) for n in n_values]
    jobs = [(s, grid_points, r_max, tol) for s in specs]
    entries, densities, states = [], {}, {}

    def collect(n, result):
        state, pair, report = result
        entries.append(SweepEntry(n, report))
        densities[n] = pair
        states[n] = state

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_analyse_n, job) for job in jobs]
            for n, fut in zip(n_values, futures):
                try:
                    collect(n, fut.result())
                except SolverError as exc:
                    raise SweepError(n, entries, exc) from exc
    else:
        for n, job in zip(n_values, jobs):
            try:
                collect(n, _analyse_n(job))
            except SolverError as exc:
                raise SweepError(n, entries, exc) from exc
    return SweepResult(tuple(entries), spec_template, grid_points, r_max, densities, states)


@dataclass(frozen=True)
class LogLawFit:
    intercept: float
    slope: float
    rms_residual: float
    n_range: tuple[int, int]

    def __call__(self, n):
        return self.intercept + self.slope * np.log(n)


def fit_log_law(points: Sequence[tuple[float, float]]) -> LogLawFit:
    """Ordinary least squares of S on ln N."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("a log-law fit needs at least 3 (N, S) points")
    n, s = pts[:, 0], pts[:, 1]
    if np.any(n < 1):
        raise ValueError("every N must be >= 1")
    if np.all(n == n[0]):
        raise ValueError("all N are equal; slope is undefined")
    design = np.column_stack([np.ones_like(n), np.log(n)])
    (a, b), *_ = np.linalg.lstsq(design, s, rcond=None)
    rms = float(np.sqrt(np.mean((s - design @ (a, b)) ** 2)))
    return LogLawFit(float(a), float(b), rms, (int(n.min()), int(n.max())))


def fit_sweep(sweep: SweepResult) -> LogLawFit:
    return fit_log_law(list(zip(sweep.n_values, sweep.column("s_total"))))


class AuditRow(NamedTuple):
    n_particles: int | None
    position_ok: bool
    momentum_ok: bool
    total_ok: bool
    slacks: dict

    @property
    def ok(self) -> bool:
        return self.position_ok and self.momentum_ok and self.total_ok


@dataclass(frozen=True)
class Audit:
    rows: tuple[AuditRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def n_checks(self) -> int:
        return 3 * len(self.rows)


def audit_report(report: EntropyReport, tol: float = AUDIT_TOL) -> AuditRow:
    slacks = {
        "s_r_lower": report.s_r - report.s_r_min,
        "s_r_upper": report.s_r_max - report.s_r,
        "s_k_lower": report.s_k - report.s_k_min,
        "s_k_upper": report.s_k_max - report.s_k,
        "s_lower": report.s_total - report.s_min,
        "s_upper": report.s_max - report.s_total,
    }

    def holds(*keys):
        return all(slacks[k] >= -tol for k in keys)

    return AuditRow(
        report.n_particles,
        holds("s_r_lower", "s_r_upper"),
        holds("s_k_lower", "s_k_upper"),
        holds("s_lower", "s_upper"),
        slacks,
    )


def audit_inequalities(sweep: SweepResult | Sequence[EntropyReport], tol: float = AUDIT_TOL) -> Audit:
    """Check min <= value <= max for S_r, S_k and S on every report."""
    reports = sweep.reports if isinstance(sweep, SweepResult) else list(sweep)
    if not reports:
        raise ValueError("nothing to audit")
    return Audit(tuple(audit_report(r, tol) for r in reports))
