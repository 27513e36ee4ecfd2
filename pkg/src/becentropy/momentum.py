"""Momentum distribution of an s-wave state by a direct spherical sine transform.

For a spherically symmetric psi(r) normalised to one,

    phi(k) = sqrt(2/pi) / k * integral_0^inf psi(r) sin(k r) r dr,

and n(k) = phi(k)^2 is normalised to one over d^3k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .radial import GridError, RadialFunction, RadialGrid, UniformMesh, integrate_radial

NORM_TOL = 1e-6
MAX_TRANSFORM_DEFECT = 1e-3
K_OVERSAMPLE = 4
_CHUNK = 1024


class MomentumTransformError(RuntimeError):
    pass


class MomentumGrid(UniformMesh):
    """Uniform momentum mesh from k = 0 to ``k_max``."""

    @property
    def k_max(self) -> float:
        return self.extent

    @classmethod
    def for_radial_grid(cls, grid: RadialGrid, oversample: int = K_OVERSAMPLE) -> MomentumGrid:
        """Nyquist-limited mesh, ``k_max = pi / dr``, ``oversample`` times denser than ``grid``."""
        return cls(np.pi / grid.spacing, oversample * (grid.n_points - 1) + 1)


@dataclass(frozen=True)
class DensityPair:
    """Position density rho(r) and momentum density n(k), each normalised to one."""

    rho: RadialFunction
    nk: RadialFunction
    transform_defect: float = 0.0

    def __post_init__(self):
        for name, f in (("rho", self.rho), ("n(k)", self.nk)):
            norm = integrate_radial(f)
            if abs(norm - 1.0) > NORM_TOL:
                raise GridError(f"{name} is normalised to {norm:.9f}, not 1")
            if f.values.min() < 0:
                i = int(np.argmin(f.values))
                raise GridError(f"{name} is negative at index {i} ({f.values[i]:.3e})")

    def rescaled(self, factor: float) -> DensityPair:
        """Stretch all lengths by ``factor``, momenta by ``1/factor``.

        rho(r) -> rho(r/f)/f^3 and n(k) -> f^3 n(f k); both stay normalised.
        """
        rgrid = self.rho.grid.scaled(factor)
        kgrid = self.nk.grid.scaled(1.0 / factor)
        return DensityPair(
            RadialFunction(rgrid, self.rho.values / factor**3),
            RadialFunction(kgrid, self.nk.values * factor**3),
            self.transform_defect,
        )


def _trapezoid_weights(grid: UniformMesh) -> np.ndarray:
    # Trapezoid is spectrally accurate for the even, decaying integrand
    # psi(r) r sin(kr); Simpson's alternating weights alias k near pi/dr.
    w = np.full(grid.n_points, grid.spacing)
    w[0] = w[-1] = 0.5 * grid.spacing
    return w


def sine_transform(psi: RadialFunction, kgrid: MomentumGrid) -> np.ndarray:
    """Momentum-space amplitude phi(k) at every node of ``kgrid``."""
    r = psi.nodes
    k = kgrid.nodes
    source = psi.values * r * _trapezoid_weights(psi.grid)
    phi = np.empty(k.size)
    for start in range(0, k.size, _CHUNK):
        kc = k[start:start + _CHUNK]
        phi[start:start + kc.size] = np.sin(np.outer(kc, r)) @ source
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(k > 0, phi / k, np.dot(source, r))
    return np.sqrt(2.0 / np.pi) * phi


def to_momentum(psi: RadialFunction, kgrid: MomentumGrid | None = None) -> DensityPair:
    """Pair |psi|^2 with the momentum distribution of ``psi``.

    n(k) is renormalised after the transform; the relative defect before
    renormalisation is kept on the result as a quality metric.
    """
    if kgrid is None:
        kgrid = MomentumGrid.for_radial_grid(psi.grid)
    rho = RadialFunction(psi.grid, psi.values**2)
    rho_norm = integrate_radial(rho)
    if abs(rho_norm - 1.0) > NORM_TOL:
        raise GridError(f"psi is normalised to {rho_norm:.9f}, not 1")
    nk = sine_transform(psi, kgrid) ** 2
    norm = integrate_radial(RadialFunction(kgrid, nk))
    defect = norm - 1.0
    if abs(defect) > MAX_TRANSFORM_DEFECT:
        raise MomentumTransformError(
            f"n(k) integrates to {norm:.6f} before renormalisation; "
            "increase k_max or refine the radial grid"
        )
    return DensityPair(
        RadialFunction(psi.grid, rho.values / rho_norm),
        RadialFunction(kgrid, nk / norm),
        float(defect),
    )
