"""Ground state of the stationary Gross-Pitaevskii equation in an isotropic trap.

In oscillator units (hbar = m = omega = 1, lengths in b = sqrt(hbar/m omega))
the equation for a wavefunction normalised to one reads

    [-1/2 lap + r^2/2 + g |psi|^2] psi = mu psi,    g = 4 pi N a / b.

The solver works on the reduced radial function u(r) = r psi(r), for which
the Laplacian becomes d^2/dr^2 with u(0) = u(R) = 0, and relaxes it in
imaginary time with a backward-Euler step whose mean-field potential is
frozen at the start of each step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .radial import (
    RadialFunction,
    RadialGrid,
    default_r_max,
    integrate_radial,
    second_derivative,
    simpson_weights,
)

log = logging.getLogger(__name__)

DEFAULT_SCATTERING_LENGTH = 52.9  # Angstrom, 87Rb
DEFAULT_TRAP_LENGTH = 12180.0  # Angstrom
DEFAULT_GRID_POINTS = 2001
BOUNDARY_THRESHOLD = 1e-10
GAUSSIAN_GUESS_MAX_COUPLING = 10.0


class SolverError(RuntimeError):
    """Base class for ground-state solver failures."""


class ConvergenceError(SolverError):
    def __init__(self, message, residual=np.nan, iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BoundaryError(SolverError):
    """The condensate is not contained in the box."""


@dataclass(frozen=True)
class TrapSpec:
    """Particle number and the two lengths fixing the dimensionless coupling."""

    n_particles: int
    scattering_length_phys: float = DEFAULT_SCATTERING_LENGTH
    trap_length_phys: float = DEFAULT_TRAP_LENGTH

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ValueError(f"n_particles must be a positive integer, got {self.n_particles}")
        if not np.isfinite(self.scattering_length_phys) or self.scattering_length_phys < 0:
            raise ValueError(
                "scattering length must be finite and >= 0 (repulsive or ideal gas), "
                f"got {self.scattering_length_phys}"
            )
        if not np.isfinite(self.trap_length_phys) or self.trap_length_phys <= 0:
            raise ValueError(f"trap length must be positive, got {self.trap_length_phys}")
        object.__setattr__(self, "n_particles", int(self.n_particles))

    @property
    def coupling(self) -> float:
        return 4.0 * np.pi * self.n_particles * self.scattering_length_phys / self.trap_length_phys

    def with_particles(self, n_particles: int) -> TrapSpec:
        return replace(self, n_particles=n_particles)


def thomas_fermi_mu(spec: TrapSpec) -> float:
    """Thomas-Fermi chemical potential ``(15 N a / b)^(2/5) / 2`` in units of hbar omega."""
    if spec.coupling <= 0:
        raise ValueError("Thomas-Fermi limit is undefined for an ideal gas (coupling 0)")
    return 0.5 * (15.0 * spec.n_particles * spec.scattering_length_phys / spec.trap_length_phys) ** 0.4


def default_grid(spec: TrapSpec, n_points: int = DEFAULT_GRID_POINTS) -> RadialGrid:
    mu_tf = thomas_fermi_mu(spec) if spec.coupling > 0 else None
    return RadialGrid(default_r_max(mu_tf), n_points)


@dataclass(frozen=True)
class CondensateState:
    """Converged condensate; energies are per particle in units of hbar omega."""

    spec: TrapSpec
    psi: RadialFunction
    chemical_potential: float
    kinetic_energy: float
    trap_energy: float
    interaction_energy: float
    iterations: int
    residual: float
    energy_history: tuple = field(default=(), repr=False)

    @property
    def grid(self) -> RadialGrid:
        return self.psi.grid

    @property
    def energy(self) -> float:
        return self.kinetic_energy + self.trap_energy + self.interaction_energy

    @property
    def mean_square_radius(self) -> float:
        # <r^2> = 2 <V_trap> for the harmonic trap
        return 2.0 * self.trap_energy

    @property
    def virial_residual(self) -> float:
        return abs(2.0 * self.kinetic_energy - 2.0 * self.trap_energy + 3.0 * self.interaction_energy)

    @property
    def mu_identity_residual(self) -> float:
        return abs(
            self.chemical_potential
            - (self.kinetic_energy + self.trap_energy + 2.0 * self.interaction_energy)
        )

    @property
    def peak_gas_parameter(self) -> float:
        """Diluteness diagnostic n(0) a^3, reported and never enforced."""
        a = self.spec.scattering_length_phys / self.spec.trap_length_phys
        return self.spec.n_particles * self.psi.values[0] ** 2 * a**3


def _psi_from_u(r: np.ndarray, u: np.ndarray) -> np.ndarray:
    """psi = u / r, with psi(0) from the even expansion c0 + c2 r^2."""
    psi = np.empty_like(u)
    psi[1:] = u[1:] / r[1:]
    psi[0] = (4.0 * psi[1] - psi[2]) / 3.0
    return psi


def _initial_u(spec: TrapSpec, r: np.ndarray) -> np.ndarray:
    g = spec.coupling
    if g < GAUSSIAN_GUESS_MAX_COUPLING:
        return r * np.exp(-0.5 * r**2)
    mu = thomas_fermi_mu(spec)
    # softplus keeps the inverted parabola smooth across the edge
    x = (mu - 0.5 * r**2) / 0.5
    density = 0.5 * np.logaddexp(0.0, x) / g
    return r * np.sqrt(density)


class _Relaxation:
    """Mutable imaginary-time state for one solve; not shared between solves."""

    def __init__(self, spec: TrapSpec, grid: RadialGrid):
        self.spec = spec
        self.grid = grid
        self.r = grid.nodes
        self.h = grid.spacing
        self.g = spec.coupling
        self.uw = 4.0 * np.pi * simpson_weights(grid.n_points, grid.spacing)
        self.trap = 0.5 * self.r**2

    def normalize(self, u):
        return u / np.sqrt(np.dot(self.uw, u * u))

    def kinetic(self, u):
        """-1/2 u'' with u(0) = u(R) = 0."""
        k = np.zeros_like(u)
        k[1:-1] = -0.5 * (u[2:] - 2.0 * u[1:-1] + u[:-2]) / self.h**2
        return k

    def mean_field(self, u):
        psi2 = np.zeros_like(u)
        psi2[1:] = (u[1:] / self.r[1:]) ** 2
        return self.g * psi2

    def energies(self, u):
        mf = self.mean_field(u)
        t = np.dot(self.uw, u * self.kinetic(u))
        v = np.dot(self.uw, self.trap * u * u)
        e_int = 0.5 * np.dot(self.uw, mf * u * u)
        return t, v, e_int

    def hamiltonian(self, u):
        return self.kinetic(u) + (self.trap + self.mean_field(u)) * u

    def step(self, u, dt):
        n = u.size - 2
        potential = (self.trap + self.mean_field(u))[1:-1]
        off = -0.5 * dt / self.h**2
        ab = np.empty((3, n))
        ab[0, :] = off
        ab[2, :] = off
        ab[1, :] = 1.0 + dt * (1.0 / self.h**2 + potential)
        new = np.zeros_like(u)
        new[1:-1] = solve_banded((1, 1), ab, u[1:-1], check_finite=False)
        return self.normalize(new)


def solve_ground_state(
    spec: TrapSpec,
    grid: RadialGrid | None = None,
    tol: float = 1e-9,
    *,
    residual_tol: float = 1e-6,
    dt: float = 0.5,
    max_iter: int = 200_000,
) -> CondensateState:
    """Relax to the nodeless ground state for ``spec`` on ``grid``.

    Iteration stops once the relative change of mu between successive steps
    is below ``tol`` and the L2 residual of the stationary equation is below
    ``residual_tol``. A step that raises the energy functional is rejected
    and retried with half the time step.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if grid is None:
        grid = default_grid(spec)
    relax = _Relaxation(spec, grid)
    u = _initial_u(spec, relax.r)
    u[0] = u[-1] = 0.0
    u = relax.normalize(u)
    energy = sum(relax.energies(u))
    history = [energy]
    mu_prev = np.inf
    residual = np.inf
    min_dt = dt * 2.0**-30

    for it in range(1, max_iter + 1):
        trial = relax.step(u, dt)
        trial_energy = sum(relax.energies(trial))
        if trial_energy > energy + 1e-13 * abs(energy):
            dt *= 0.5
            log.debug("energy rose at iteration %d, dt -> %g", it, dt)
            if dt < min_dt:
                raise ConvergenceError(
                    f"time step underflow for N={spec.n_particles}", residual, it
                )
            continue
        u, energy = trial, trial_energy
        history.append(energy)

        hu = relax.hamiltonian(u)
        mu = np.dot(relax.uw, u * hu)
        residual = np.sqrt(np.dot(relax.uw, (hu - mu * u) ** 2))
        if abs(mu - mu_prev) < tol * abs(mu) and residual < residual_tol:
            break
        mu_prev = mu
    else:
        raise ConvergenceError(
            f"no convergence for N={spec.n_particles} after {max_iter} iterations "
            f"(last residual {residual:.3e})",
            residual,
            max_iter,
        )

    u = np.abs(u)
    psi = RadialFunction(grid, _psi_from_u(relax.r, u))
    edge = psi.values[int(0.9 * grid.n_points):]
    if edge.max() > BOUNDARY_THRESHOLD:
        raise BoundaryError(
            f"|psi| = {edge.max():.2e} near r_max = {grid.r_max:g} for N={spec.n_particles}; "
            "increase r_max"
        )
    t, v, e_int = relax.energies(u)
    state = CondensateState(
        spec=spec,
        psi=psi,
        chemical_potential=float(mu),
        kinetic_energy=float(t),
        trap_energy=float(v),
        interaction_energy=float(e_int),
        iterations=it,
        residual=float(residual),
        energy_history=tuple(history),
    )
    log.info(
        "N=%d: mu=%.6f after %d iterations (residual %.1e)",
        spec.n_particles, state.chemical_potential, it, state.residual,
    )
    return state


def position_kinetic_energy(psi: RadialFunction) -> float:
    """Kinetic energy per particle from the Laplacian of ``psi`` in position space.

    Independent of the solver internals; used to cross-check the momentum-space
    value.
    """
    r = psi.nodes
    u = RadialFunction(psi.grid, r * psi.values)
    upp = second_derivative(u).values
    integrand = np.zeros_like(r)
    integrand[1:] = -0.5 * psi.values[1:] * upp[1:] / r[1:]
    return integrate_radial(RadialFunction(psi.grid, integrand))
