"""Masked-grid Dirichlet Laplacian ground states and derived diagnostics.

Domains are rasterized onto uniform grid nodes; nodes strictly inside the
polygon are active and all outside neighbors are held at zero.  The smallest
eigenpair comes from zero-shift inverse power iteration, each linear solve
done by conjugate gradients against a matrix-free five-point stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .convexdomain import ConvexPolygon, HeightFunction, inradius, localization_scale
from .eigensolve1d import Eigenpair1D
from .errors import GeometryError, NumericError, ParameterError

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


@dataclass(frozen=True)
class MaskedGrid:
    """Uniform node grid over a polygon's bounding box with an interior mask.

    mask[i, j] flags the node at origin + (i, j) * spacing; indexing is
    x-major so CSV exports iterate rows in (i, j) order.
    """

    spacing: float
    origin: np.ndarray
    mask: np.ndarray
    activeCount: int

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=float)
        mask = np.asarray(self.mask)
        if not (math.isfinite(self.spacing) and self.spacing > 0.0):
            raise ParameterError("grid spacing must be positive and finite")
        if origin.shape != (2,) or not np.all(np.isfinite(origin)):
            raise ParameterError("grid origin must be a finite 2D point")
        if mask.ndim != 2 or mask.dtype != np.bool_:
            raise ParameterError("mask must be a 2D boolean array")
        count = int(mask.sum())
        if self.activeCount != count or count < 1:
            raise ParameterError("activeCount must match a nonempty mask")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "mask", mask)

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        return np.nonzero(self.mask)

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        i, j = np.nonzero(self.mask)
        return self.origin[0] + i * self.spacing, self.origin[1] + j * self.spacing


@dataclass(frozen=True)
class Eigenpair2D:
    """Ground state over active cells, L2-normalized with weight spacing^2."""

    lambda1: float
    u: np.ndarray
    residual: float
    grid: MaskedGrid


def rasterize(poly: ConvexPolygon, spacing: float) -> MaskedGrid:
    """Mark grid nodes strictly inside the polygon.

    Spacing coarser than a quarter inradius leaves too few cells across the
    thin direction for the stencil to see the domain shape and is rejected.
    """
    if not (isinstance(spacing, (int, float)) and math.isfinite(spacing) and spacing > 0):
        raise ParameterError("spacing must be positive and finite")
    rho = inradius(poly)
    if spacing > 0.25 * rho * (1.0 + 1e-6):
        raise ParameterError(
            f"spacing {spacing:g} too coarse for inradius {rho:g}; need <= inradius/4"
        )
    v = poly.vertices
    xmin, ymin = v.min(axis=0)
    xmax, ymax = v.max(axis=0)
    nx = int(math.ceil((xmax - xmin) / spacing - 1e-9)) + 1
    ny = int(math.ceil((ymax - ymin) / spacing - 1e-9)) + 1
    x = xmin + spacing * np.arange(nx)
    y = ymin + spacing * np.arange(ny)
    inside = np.ones((nx, ny), dtype=bool)
    gx = x[:, None]
    gy = y[None, :]
    for k in range(len(v)):
        px, py = v[k]
        qx, qy = v[(k + 1) % len(v)]
        inside &= (qx - px) * (gy - py) - (qy - py) * (gx - px) > 0.0
    count = int(inside.sum())
    if count == 0:
        raise GeometryError("rasterization produced no interior nodes")
    _, parts = ndimage.label(inside, structure=_FOUR_CONNECTED)
    if parts != 1:
        raise GeometryError(f"interior nodes split into {parts} components")
    return MaskedGrid(
        spacing=float(spacing),
        origin=np.array([xmin, ymin]),
        mask=inside,
        activeCount=count,
    )


def _make_apply(mask: np.ndarray, h2: float):
    """Five-point Dirichlet Laplacian on mask-supported fields."""

    def apply_a(f: np.ndarray) -> np.ndarray:
        out = 4.0 * f
        out[1:, :] -= f[:-1, :]
        out[:-1, :] -= f[1:, :]
        out[:, 1:] -= f[:, :-1]
        out[:, :-1] -= f[:, 1:]
        out /= h2
        out *= mask
        return out

    return apply_a


def _conjugate_gradient(apply_a, b, x0, rtol, maxiter):
    x = x0.copy()
    r = b - apply_a(x)
    target = rtol * math.sqrt(float(np.vdot(b, b)))
    rs = float(np.vdot(r, r))
    if math.sqrt(rs) <= target:
        return x
    p = r.copy()
    for _ in range(maxiter):
        ap = apply_a(p)
        denom = float(np.vdot(p, ap))
        if denom <= 0.0:
            raise NumericError("conjugate gradient hit non-positive curvature")
        alpha = rs / denom
        x += alpha * p
        r -= alpha * ap
        rs_next = float(np.vdot(r, r))
        if math.sqrt(rs_next) <= target:
            return x
        p *= rs_next / rs
        p += r
        rs = rs_next
    raise NumericError(
        f"conjugate gradient stalled after {maxiter} iterations "
        f"(residual {math.sqrt(rs):.3e}, target {target:.3e})"
    )


def smallest_eigenpair_2d(grid: MaskedGrid, tol: float = 1e-6, max_outer: int = 2000) -> Eigenpair2D:
    """Ground state of the masked five-point Laplacian.

    Inverse power iteration with zero shift; stops when the relative
    eigenresidual |A v - lambda v| / lambda drops to tol.  Each solve warm
    starts from the previous eigenvector estimate, so late iterations cost
    only a handful of CG steps.
    """
    if not (isinstance(tol, (int, float)) and math.isfinite(tol) and tol > 0):
        raise ParameterError("tolerance must be positive and finite")
    mask = grid.mask
    h2 = grid.spacing * grid.spacing
    apply_a = _make_apply(mask, h2)
    cg_cap = max(500, 8 * (mask.shape[0] + mask.shape[1]))
    v = mask.astype(float)
    v /= math.sqrt(float(np.vdot(v, v)))
    lam = float(np.vdot(v, apply_a(v)))
    res = math.inf
    for _ in range(max_outer):
        x = _conjugate_gradient(apply_a, v, v / lam, rtol=1e-8, maxiter=cg_cap)
        norm = math.sqrt(float(np.vdot(x, x)))
        if norm == 0.0 or not math.isfinite(norm):
            raise NumericError("inverse iteration produced a degenerate vector")
        v = x / norm
        av = apply_a(v)
        lam = float(np.vdot(v, av))
        res = math.sqrt(float(np.vdot(av - lam * v, av - lam * v))) / lam
        if res <= tol:
            u = v[mask] / grid.spacing
            if float(u.sum()) < 0.0:
                u = -u
            return Eigenpair2D(lambda1=lam, u=u, residual=res, grid=grid)
    raise NumericError(
        f"inverse iteration missed tol={tol:g} after {max_outer} outer steps "
        f"(last residual {res:.3e})"
    )


def vdberg_statistic(pair: Eigenpair2D, rho: float, dm: float) -> float:
    """Scale-invariant sup-norm statistic sup|u| * rho * (D/rho)^(1/6).

    Relies on the unit L2 normalization of u, so sup|u| is the ratio of
    norms that the diameter-inradius bound controls.
    """
    if not (math.isfinite(rho) and rho > 0.0 and math.isfinite(dm) and dm > 0.0):
        raise ParameterError("inradius and diameter must be positive")
    return float(np.max(np.abs(pair.u))) * rho * (dm / rho) ** (1.0 / 6.0)


def gj_profile_error(pair: Eigenpair2D, hf: HeightFunction, profile: Eigenpair1D) -> float:
    """Sup distance between the 2D ground state and its 1D-profile surrogate.

    Both fields are max-normalized; the surrogate is profile(x) times the
    transverse sine mode pinned to the local boundary graphs.  The sup runs
    over active cells whose x lies in the middle half of the longest run
    where h stays above the localization threshold.
    """
    if profile.f.size != hf.h.size - 2:
        raise ParameterError("1D profile grid does not match the height function grid")
    scale = localization_scale(hf)
    level = 1.0 - 1.0 / (scale * scale)
    runs = np.concatenate(([False], hf.h >= level, [False]))
    d = np.diff(runs.astype(np.int8))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    if starts.size == 0:
        raise ParameterError("height function never reaches the localization level")
    k = int(np.argmax(ends - starts))
    nodes = hf.nodes()
    x_lo = nodes[starts[k]]
    x_hi = nodes[ends[k] - 1]
    center = 0.5 * (x_lo + x_hi)
    quarter = 0.25 * (x_hi - x_lo)
    xa, ya = pair.grid.points()
    sel = (xa >= center - quarter) & (xa <= center + quarter)
    if not sel.any():
        raise ParameterError("no active cells fall in the concentric half-window")
    xq = xa[sel]
    yq = ya[sel]
    u1 = pair.u[sel] / float(np.max(np.abs(pair.u)))
    phi_nodes = np.concatenate(([0.0], profile.f / float(np.max(np.abs(profile.f))), [0.0]))
    phi = np.interp(xq, nodes, phi_nodes)
    f1v = np.interp(xq, nodes, hf.f1)
    hv = np.maximum(np.interp(xq, nodes, hf.h), 1e-12)
    alpha = math.pi * (yq - f1v) / hv
    return float(np.max(np.abs(u1 - phi * np.sin(alpha))))
