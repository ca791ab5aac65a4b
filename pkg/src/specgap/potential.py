"""Potentials on an interval, stored as uniform grids.

A grid holds samples V_0..V_{n+1} at the n+2 nodes x_i = a + i*dx with
dx = (b-a)/(n+1), endpoints included. Values above the cap are clamped, so
every grid is finite even for model potentials with a pole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from specgap.errors import ParameterError

DEFAULT_CAP = 1e12


@dataclass(frozen=True)
class PotentialSpec:
    """Closed-form description of a potential, used to build grids."""

    kind: str
    params: Sequence[float]
    interval: Tuple[float, float]


@dataclass(frozen=True)
class PotentialGrid:
    a: float
    b: float
    values: np.ndarray
    cap: float = DEFAULT_CAP

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if not self.b > self.a:
            raise ParameterError(f"interval must satisfy b > a, got [{self.a}, {self.b}]")
        if vals.ndim != 1 or len(vals) < 5:
            raise ParameterError("grid needs at least 3 interior nodes (5 samples)")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid values must be finite")
        if np.any(vals > self.cap * (1 + 1e-15) + 1e-300):
            raise ParameterError("grid values exceed the cap")

    @property
    def n(self) -> int:
        """Number of interior nodes."""
        return len(self.values) - 2

    @property
    def dx(self) -> float:
        return (self.b - self.a) / (self.n + 1)

    def nodes(self) -> np.ndarray:
        """All n+2 node coordinates, endpoints included."""
        return np.linspace(self.a, self.b, self.n + 2)


def _evaluate(spec: PotentialSpec, x: np.ndarray) -> np.ndarray:
    a, b = spec.interval
    kind = spec.kind
    p = list(spec.params or [])
    if kind == "squareWell":
        return np.zeros_like(x)
    if kind == "linearWell":
        slope = p[0] if len(p) >= 1 else 1.0
        center = p[1] if len(p) >= 2 else 0.5 * (a + b)
        if slope <= 0:
            raise ParameterError("linearWell slope must be positive")
        return slope * np.abs(x - center)
    if kind == "harmonic":
        center = p[0] if len(p) >= 1 else 0.5 * (a + b)
        return (x - center) ** 2
    if kind == "quartic":
        center = p[0] if len(p) >= 1 else 0.5 * (a + b)
        return (x - center) ** 4
    if kind == "coneModel":
        if len(p) != 1:
            raise ParameterError("coneModel takes exactly one parameter")
        D = float(p[0])
        if D <= 1:
            raise ParameterError(f"coneModel needs D > 1, got {D}")
        if a < 0 or b > D:
            raise ParameterError("coneModel grid must lie inside [0, D]")
        with np.errstate(divide="ignore"):
            return D * D / (D - x) ** 2 - 1.0
    if kind == "samples":
        if len(p) < 2:
            raise ParameterError("samples kind needs at least two values")
        xs = np.linspace(a, b, len(p))
        return np.interp(x, xs, p)
    if kind == "piecewiseLinear":
        if len(p) < 4 or len(p) % 2 != 0:
            raise ParameterError("piecewiseLinear takes a flat knot list x0,y0,x1,y1,...")
        knots = np.asarray(p, dtype=float).reshape(-1, 2)
        xs, ys = knots[:, 0], knots[:, 1]
        if np.any(np.diff(xs) <= 0):
            raise ParameterError("piecewiseLinear knot abscissae must be strictly increasing")
        return np.interp(x, xs, ys)
    raise ParameterError(f"unknown potential kind {kind!r}")


def sample(spec: PotentialSpec, n: int, cap: float = DEFAULT_CAP) -> PotentialGrid:
    """Evaluate a spec on the uniform grid with n interior nodes.

    Values above the cap (including the cone model's pole) are clamped to it.
    """
    a, b = spec.interval
    if not b > a:
        raise ParameterError(f"interval must satisfy b > a, got [{a}, {b}]")
    if n < 3:
        raise ParameterError(f"need at least 3 interior nodes, got {n}")
    if not cap > 0:
        raise ParameterError(f"cap must be positive, got {cap}")
    x = np.linspace(a, b, n + 2)
    vals = np.minimum(_evaluate(spec, x), cap)
    return PotentialGrid(a=a, b=b, values=vals, cap=cap)


def cone_model_potential(D: float, n: int, cap: float = DEFAULT_CAP) -> PotentialGrid:
    """Grid for V(x) = D^2/(D-x)^2 - 1 on [0, D], pole clamped at the cap."""
    if D <= 1:
        raise ParameterError(f"cone model needs D > 1, got {D}")
    spec = PotentialSpec(kind="coneModel", params=[float(D)], interval=(0.0, float(D)))
    return sample(spec, n, cap=cap)


def shift(grid: PotentialGrid, c: float) -> PotentialGrid:
    """Add the constant c to every value. The cap shifts along."""
    return PotentialGrid(a=grid.a, b=grid.b, values=grid.values + c, cap=grid.cap + c)


def min_value(grid: PotentialGrid) -> float:
    return float(grid.values.min())
