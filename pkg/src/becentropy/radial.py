"""Uniform radial meshes and quadrature for spherically symmetric integrands.

All lengths are in oscillator units. A radial integral here always means the
full three-dimensional integral of a spherically symmetric function,

    integral f(|x|) d^3x = 4 pi * integral_0^R f(r) r^2 dr.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MIN_POINTS = 64
SPACING_RTOL = 1e-12


class GridError(ValueError):
    """Raised for malformed grids or samples."""


def simpson_weights(n_points: int, spacing: float) -> np.ndarray:
    """Composite Simpson weights on ``n_points`` equally spaced nodes.

    For an even number of nodes the last interval is closed with the
    three-point end correction (5, 8, -1)/12, which keeps third-order local
    accuracy.
    """
    if n_points < 3:
        raise GridError(f"Simpson rule needs at least 3 nodes, got {n_points}")
    w = np.zeros(n_points)
    m = n_points if n_points % 2 == 1 else n_points - 1
    w[:m:2] = 2.0
    w[1:m:2] = 4.0
    w[0] = 1.0
    w[m - 1] = 1.0
    w[:m] *= spacing / 3.0
    if m != n_points:
        w[-1] += 5.0 * spacing / 12.0
        w[-2] += 8.0 * spacing / 12.0
        w[-3] -= spacing / 12.0
    return w


@dataclass(frozen=True)
class UniformMesh:
    """Uniform mesh ``0 = x_0 < x_1 < ... < x_{n-1} = extent``."""

    extent: float
    n_points: int

    def __post_init__(self):
        if not np.isfinite(self.extent) or self.extent <= 0:
            raise GridError(f"mesh extent must be positive, got {self.extent}")
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise GridError(
                f"mesh needs an integer n_points >= {MIN_POINTS}, got {self.n_points}"
            )
        object.__setattr__(self, "extent", float(self.extent))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def spacing(self) -> float:
        return self.extent / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        x = np.linspace(0.0, self.extent, self.n_points)
        x.setflags(write=False)
        return x

    @cached_property
    def weights(self) -> np.ndarray:
        """Simpson weights times the spherical measure 4 pi x^2."""
        w = simpson_weights(self.n_points, self.spacing) * 4.0 * np.pi * self.nodes**2
        w.setflags(write=False)
        return w

    def scaled(self, factor: float):
        return type(self)(self.extent * factor, self.n_points)


class RadialGrid(UniformMesh):
    """Position-space radial grid; ``r_max`` is an alias of ``extent``."""

    @property
    def r_max(self) -> float:
        return self.extent


def default_r_max(mu_tf: float | None = None) -> float:
    """Box radius: three Thomas-Fermi radii, never below 10 oscillator lengths."""
    if mu_tf is None or mu_tf <= 0:
        return 10.0
    return max(10.0, 3.0 * np.sqrt(2.0 * mu_tf))


@dataclass(frozen=True)
class RadialFunction:
    """Real samples of a spherically symmetric function on a uniform mesh."""

    grid: UniformMesh
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise GridError(
                f"expected {self.grid.n_points} samples, got shape {v.shape}"
            )
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise GridError(f"non-finite sample at index {bad[0]} ({v[bad[0]]})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __add__(self, other):
        if isinstance(other, RadialFunction):
            _check_same_grid(self, other)
            return RadialFunction(self.grid, self.values + other.values)
        return RadialFunction(self.grid, self.values + other)

    def __mul__(self, other):
        if isinstance(other, RadialFunction):
            _check_same_grid(self, other)
            return RadialFunction(self.grid, self.values * other.values)
        return RadialFunction(self.grid, self.values * other)

    __radd__ = __add__
    __rmul__ = __mul__


def _check_same_grid(f: RadialFunction, g: RadialFunction):
    if f.grid != g.grid:
        raise GridError("radial functions live on different grids")


def integrate_radial(f: RadialFunction) -> float:
    """Return ``4 pi * integral_0^R f(r) r^2 dr`` by composite Simpson."""
    return float(np.dot(f.grid.weights, f.values))


def second_derivative(f: RadialFunction) -> RadialFunction:
    """Second derivative by centred differences, one-sided at both ends.

    The interior stencil is (1, -2, 1)/h^2 and the boundary stencil is the
    four-point (2, -5, 4, -1)/h^2, so quadratics are differentiated exactly.
    """
    n = f.grid.n_points
    if n < 5:
        raise GridError(f"second derivative needs at least 5 nodes, got {n}")
    y = f.values
    h2 = f.grid.spacing**2
    d2 = np.empty(n)
    d2[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / h2
    d2[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2
    d2[-1] = (2.0 * y[-1] - 5.0 * y[-2] + 4.0 * y[-3] - y[-4]) / h2
    return RadialFunction(f.grid, d2)
