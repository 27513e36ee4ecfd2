"""Batch front end: ``becentropy [options]`` or ``python -m becentropy``.

Runs a particle-number sweep (default) or audits an externally tabulated
density pair, and writes table.csv, fit.json, fig1.dat and fig2.dat.

Exit codes: 0 success, 1 usage or configuration error, 2 solver failure,
3 ingestion validation failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .entropy import EntropyError
from .gpe import (
    DEFAULT_GRID_POINTS,
    DEFAULT_SCATTERING_LENGTH,
    DEFAULT_TRAP_LENGTH,
    SolverError,
    TrapSpec,
)
from .io import (
    IngestionError,
    emit_ingest_report,
    emit_reports,
    export_density_pair,
    ingest_density_pair,
)
from .momentum import MomentumTransformError
from .radial import MIN_POINTS
from .scaling import TABLE_N_VALUES, SweepError, fit_sweep, run_sweep

log = logging.getLogger(__name__)

FORMATS = ("csv", "json", "plotdata")
EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_INGEST = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_values: tuple[int, ...] = TABLE_N_VALUES
    scattering_length_angstrom: float = DEFAULT_SCATTERING_LENGTH
    trap_length_angstrom: float = DEFAULT_TRAP_LENGTH
    r_max: float | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    tol: float = 1e-9
    out_dir: str = ""
    formats: tuple[str, ...] = FORMATS
    ingest_position: str | None = None
    ingest_momentum: str | None = None
    export_densities: bool = False
    workers: int = 1

    @property
    def mode(self) -> str:
        return "ingest-densities" if self.ingest_position else "gpe-sweep"

    @property
    def trap_spec(self) -> TrapSpec:
        return TrapSpec(1, self.scattering_length_angstrom, self.trap_length_angstrom)


def _int_list(text) -> tuple[int, ...]:
    if isinstance(text, (tuple, list)):
        items = list(text)
    else:
        items = [t for t in str(text).replace(" ", "").split(",") if t]
    out = []
    for item in items:
        value = float(item)
        if not value.is_integer():
            raise ValueError(f"{item!r} is not an integer")
        out.append(int(value))
    return tuple(out)


def _formats(text) -> tuple[str, ...]:
    items = text if isinstance(text, (tuple, list)) else str(text).split(",")
    items = tuple(t.strip() for t in items if t.strip())
    unknown = set(items) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown format(s) {sorted(unknown)}; choose from {FORMATS}")
    return items


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# config-file key -> (RunConfig field, converter)
_KEYS = {
    "n_values": ("n_values", _int_list),
    "scattering_length_angstrom": ("scattering_length_angstrom", float),
    "trap_length_angstrom": ("trap_length_angstrom", float),
    "r_max": ("r_max", float),
    "grid_points": ("grid_points", int),
    "tol": ("tol", float),
    "out_dir": ("out_dir", str),
    "format": ("formats", _formats),
    "ingest_position": ("ingest_position", str),
    "ingest_momentum": ("ingest_momentum", str),
    "export_densities": ("export_densities", _bool),
    "workers": ("workers", int),
}


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; '#' comments; keys as in the long CLI flags."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="becentropy",
        description="Information entropies of trapped Bose condensates versus particle number.",
    )
    p.add_argument("--config", metavar="FILE", help="key = value configuration file")
    p.add_argument("--n-values", help="comma-separated particle numbers (strictly increasing)")
    p.add_argument("--scattering-length-angstrom", type=str)
    p.add_argument("--trap-length-angstrom", type=str)
    p.add_argument("--r-max", type=str, help="box radius in oscillator lengths (default: per N)")
    p.add_argument("--grid-points", type=str, help=f"radial nodes (>= {MIN_POINTS})")
    p.add_argument("--tol", type=str, help="relative mu tolerance of the solver")
    p.add_argument("--out-dir", help="output directory (default: current)")
    p.add_argument("--format", help=f"comma-separated subset of {','.join(FORMATS)}")
    p.add_argument("--ingest-position", metavar="FILE", help="tabulated rho(r)")
    p.add_argument("--ingest-momentum", metavar="FILE", help="tabulated n(k)")
    p.add_argument("--export-densities", action="store_true", default=None,
                   help="also write rho_N.dat and nk_N.dat for every N")
    p.add_argument("--workers", type=str, help="parallel solver processes")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _validate(cfg: RunConfig, explicit: set) -> RunConfig:
    if not cfg.n_values:
        raise ConfigError("n_values is empty")
    if min(cfg.n_values) < 1:
        raise ConfigError(f"particle numbers must be >= 1, got {list(cfg.n_values)}")
    if any(b <= a for a, b in zip(cfg.n_values, cfg.n_values[1:])):
        raise ConfigError(f"n_values must be strictly increasing, got {list(cfg.n_values)}")
    if not np.isfinite(cfg.scattering_length_angstrom) or cfg.scattering_length_angstrom < 0:
        raise ConfigError(
            f"scattering length must be >= 0 Angstrom, got {cfg.scattering_length_angstrom}"
        )
    if not np.isfinite(cfg.trap_length_angstrom) or cfg.trap_length_angstrom <= 0:
        raise ConfigError(f"trap length must be > 0 Angstrom, got {cfg.trap_length_angstrom}")
    if cfg.r_max is not None and not (np.isfinite(cfg.r_max) and cfg.r_max > 0):
        raise ConfigError(f"r_max must be > 0, got {cfg.r_max}")
    if cfg.grid_points < MIN_POINTS:
        raise ConfigError(f"grid_points must be >= {MIN_POINTS}, got {cfg.grid_points}")
    if not cfg.tol > 0:
        raise ConfigError(f"tol must be > 0, got {cfg.tol}")
    if cfg.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {cfg.workers}")
    if not cfg.formats:
        raise ConfigError("no output format selected")
    if bool(cfg.ingest_position) != bool(cfg.ingest_momentum):
        raise ConfigError("--ingest-position and --ingest-momentum must be given together")
    if cfg.ingest_position and "n_values" in explicit:
        raise ConfigError("--n-values conflicts with density ingestion")
    if cfg.ingest_position and cfg.export_densities:
        raise ConfigError("--export-densities conflicts with density ingestion")
    return cfg


def parse_config(args=None, file=None) -> RunConfig:
    """Merge defaults, then ``file`` (or ``--config``), then command-line flags.

    ``args`` is an argv list or an already parsed namespace.
    """
    if args is None or isinstance(args, (list, tuple)):
        try:
            ns = build_parser().parse_args(args if args is not None else [])
        except SystemExit as exc:
            raise ConfigError("invalid command line") from exc
    else:
        ns = args
    raw = {}
    file = file or getattr(ns, "config", None)
    if file:
        raw.update(read_config_file(file))
    for key in _KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            raw[key] = value

    kwargs = {}
    for key, value in raw.items():
        name, convert = _KEYS[key]
        try:
            kwargs[name] = convert(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    return _validate(RunConfig(**kwargs), set(raw))


def _run_sweep(cfg: RunConfig) -> list[Path]:
    sweep = run_sweep(
        cfg.trap_spec,
        cfg.n_values,
        grid_points=cfg.grid_points,
        r_max=cfg.r_max,
        tol=cfg.tol,
        workers=cfg.workers,
    )
    fit = fit_sweep(sweep) if len(sweep.entries) >= 3 else None
    if fit is None:
        log.warning("fewer than 3 particle numbers; skipping the log-law fit")
        cfg = replace(cfg, formats=tuple(f for f in cfg.formats if f != "json"))
    written = emit_reports(sweep, fit, cfg)
    if cfg.export_densities:
        out = Path(cfg.out_dir or ".")
        for n, pair in sweep.densities.items():
            pos, mom = out / f"rho_{n}.dat", out / f"nk_{n}.dat"
            export_density_pair(pair, pos, mom)
            written += [pos, mom]
    for n, rep in sweep.entries:
        print(f"N={n:<9d} S_r={rep.s_r:8.4f} S_k={rep.s_k:8.4f} S={rep.s_total:7.4f} "
              f"S(max)={rep.s_max:7.4f} Omega={rep.omega:.5f}")
    if fit is not None:
        print(f"S = {fit.intercept:.4f} + {fit.slope:.4f} ln N  (rms {fit.rms_residual:.2e})")
    return written


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = parse_config(ns)
    except ConfigError as exc:
        print(f"becentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if cfg.mode == "ingest-densities":
            report = ingest_density_pair(cfg.ingest_position, cfg.ingest_momentum)
            written = emit_ingest_report(report, cfg)
            print(f"S_r={report.s_r:.6f} S_k={report.s_k:.6f} S={report.s_total:.6f} "
                  f"S(max)={report.s_max:.6f} Omega={report.omega:.6f}")
        else:
            written = _run_sweep(cfg)
    except IngestionError as exc:
        print(f"becentropy: ingestion failed: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except EntropyError as exc:
        code = EXIT_INGEST if cfg.mode == "ingest-densities" else EXIT_SOLVER
        print(f"becentropy: {exc}", file=sys.stderr)
        return code
    except (SweepError, SolverError, MomentumTransformError) as exc:
        print(f"becentropy: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"becentropy: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
