"""Shannon entropies of conjugate densities, their rigorous bounds, and Landsberg order.

Entropies are in nats. The position/momentum split depends on the length unit
(oscillator units here); the sum S = S_r + S_k does not.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .momentum import DensityPair
from .radial import RadialFunction, integrate_radial

GAUSSIAN_ENTROPY = 1.5 * (1.0 + np.log(np.pi))  # one 3D Gaussian, per space
EUR_BOUND = 2.0 * GAUSSIAN_ENTROPY  # 3 (1 + ln pi) ~= 6.434
DENSITY_FLOOR = 1e-30
NORM_TOL = 1e-6
NEGATIVE_TOL = -1e-12
TAIL_TOL = 1e-6
OMEGA_SLACK = 1e-6


class EntropyError(ValueError):
    pass


class BoundViolation(EntropyError):
    """S exceeds S(max): the inputs are not a converged, consistent state."""


class Moments(NamedTuple):
    kinetic: float
    msr: float


class EURBounds(NamedTuple):
    s_r_min: float
    s_r_max: float
    s_k_min: float
    s_k_max: float
    s_min: float
    s_max: float


@dataclass(frozen=True)
class EntropyReport:
    s_r: float
    s_k: float
    s_total: float
    kinetic: float
    msr: float
    s_r_min: float
    s_r_max: float
    s_k_min: float
    s_k_max: float
    s_min: float
    s_max: float
    omega: float
    n_particles: int | None = None
    moments_converged: bool = True

    @property
    def delta(self) -> float:
        """Landsberg disorder, 1 - omega."""
        return 1.0 - self.omega

    @property
    def bounds(self) -> EURBounds:
        return EURBounds(
            self.s_r_min, self.s_r_max, self.s_k_min, self.s_k_max, self.s_min, self.s_max
        )

    def to_dict(self) -> dict:
        return asdict(self)


def shannon_entropy(density: RadialFunction) -> float:
    """-integral p ln p d^3x for a normalised, nonnegative radial density."""
    p = density.values
    if p.min() < NEGATIVE_TOL:
        i = int(np.argmin(p))
        raise EntropyError(f"density is negative at index {i} ({p[i]:.3e})")
    norm = integrate_radial(density)
    if abs(norm - 1.0) > NORM_TOL:
        raise EntropyError(f"density is normalised to {norm:.9f}, not 1")
    mask = p >= DENSITY_FLOOR
    plogp = np.zeros_like(p)
    plogp[mask] = p[mask] * np.log(p[mask])
    return -integrate_radial(RadialFunction(density.grid, plogp))


def _moment(f: RadialFunction, power: int) -> tuple[float, float]:
    """Return the moment integral and the fraction contributed by the outer tenth of the mesh."""
    x = f.nodes
    integrand = f.values * x**power
    contrib = f.grid.weights * integrand
    total = float(contrib.sum())
    tail = float(contrib[int(0.9 * x.size):].sum())
    return total, abs(tail) / abs(total) if total else 0.0


def moments(pair: DensityPair) -> Moments:
    """Kinetic energy per particle from n(k) and mean-square radius from rho(r)."""
    k2, _ = _moment(pair.nk, 2)
    r2, _ = _moment(pair.rho, 2)
    return Moments(0.5 * k2, r2)


def moments_converged(pair: DensityPair, tol: float = TAIL_TOL) -> bool:
    return _moment(pair.nk, 2)[1] <= tol and _moment(pair.rho, 2)[1] <= tol


def eur_bounds(kinetic: float, msr: float) -> EURBounds:
    """Six entropy bounds from T and <r^2> (densities normalised to one, hbar = m = 1)."""
    if not (kinetic > 0 and msr > 0):
        raise EntropyError(f"bounds need T > 0 and <r^2> > 0, got T={kinetic}, <r^2>={msr}")
    log_t = 1.5 * np.log(4.0 / 3.0 * kinetic)
    log_r = 1.5 * np.log(2.0 / 3.0 * msr)
    return EURBounds(
        s_r_min=GAUSSIAN_ENTROPY - log_t,
        s_r_max=GAUSSIAN_ENTROPY + log_r,
        s_k_min=GAUSSIAN_ENTROPY - log_r,
        s_k_max=GAUSSIAN_ENTROPY + log_t,
        s_min=EUR_BOUND,
        s_max=EUR_BOUND + 1.5 * np.log(8.0 / 9.0 * msr * kinetic),
    )


def landsberg_omega(s_total: float, s_max: float) -> float:
    """Order parameter 1 - S/S(max).

    A sum above S(max) by less than ``OMEGA_SLACK`` is treated as touching the
    bound (omega = 0); anything larger is a bound violation.
    """
    if not s_max > 0:
        raise EntropyError(f"S(max) must be positive, got {s_max}")
    if s_total > s_max + OMEGA_SLACK:
        raise BoundViolation(f"S = {s_total:.8f} exceeds S(max) = {s_max:.8f}")
    return max(0.0, 1.0 - s_total / s_max)


def entropy_report(pair: DensityPair, n_particles: int | None = None) -> EntropyReport:
    s_r = shannon_entropy(pair.rho)
    s_k = shannon_entropy(pair.nk)
    mom = moments(pair)
    bounds = eur_bounds(mom.kinetic, mom.msr)
    s_total = s_r + s_k
    return EntropyReport(
        s_r=s_r,
        s_k=s_k,
        s_total=s_total,
        kinetic=mom.kinetic,
        msr=mom.msr,
        **bounds._asdict(),
        omega=landsberg_omega(s_total, bounds.s_max),
        n_particles=n_particles,
        moments_converged=moments_converged(pair),
    )
