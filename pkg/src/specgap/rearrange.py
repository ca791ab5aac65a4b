"""Symmetric rearrangements about the interval midpoint and the inequality
chain they satisfy.

Placement convention: the extremal value goes to the center node (for an
even count, the left of the two middle nodes) and the rest alternate
outward, right first. Sorting is stable, so tied values keep input order.
With both arrays arranged this way, the potential-times-mass sum pairs the
k-th smallest potential value with the k-th largest mass, which is the
minimal pairing, so that inequality is exact. The gradient and eigenvalue
comparisons pick up O(dx) boundary terms, covered by chain_slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from specgap.eigensolve1d import discretize, smallest_eigenpair
from specgap.potential import PotentialGrid

_SLACK_FACTOR = 10.0


@dataclass(frozen=True)
class RearrangementReport:
    hlLeft: float
    hlRight: float
    psLeft: float
    psRight: float
    lambdaOriginal: float
    lambdaRearranged: float


def _center_out_positions(m: int) -> np.ndarray:
    """Node indices in placement order: center, then alternating right/left."""
    center = (m - 1) // 2 if m % 2 == 1 else m // 2 - 1
    positions = np.empty(m, dtype=int)
    positions[0] = center
    step, side = 1, 0
    for k in range(1, m):
        if side == 0:
            positions[k] = center + step
            side = 1
        else:
            positions[k] = center - step
            side = 0
            step += 1
    return positions


def symmetric_decreasing(f: np.ndarray, dx: float) -> np.ndarray:
    """Equimeasurable rearrangement of |f| peaking at the center node."""
    f = np.abs(np.asarray(f, dtype=float))
    order = np.argsort(-f, kind="stable")
    out = np.empty_like(f)
    out[_center_out_positions(len(f))] = f[order]
    return out


def symmetric_increasing(V: np.ndarray, dx: float) -> np.ndarray:
    """Equimeasurable rearrangement of V dipping at the center node."""
    V = np.asarray(V, dtype=float)
    order = np.argsort(V, kind="stable")
    out = np.empty_like(V)
    out[_center_out_positions(len(V))] = V[order]
    return out


def chain_slack(grid: PotentialGrid, f: np.ndarray) -> float:
    """Discretization allowance for the gradient and eigenvalue comparisons."""
    vrange = float(grid.values.max() - grid.values.min())
    fmax = float(np.max(np.abs(f)))
    return _SLACK_FACTOR * grid.dx * vrange * fmax * fmax


def _gradient_energy(f: np.ndarray, dx: float) -> float:
    padded = np.concatenate(([0.0], f, [0.0]))
    grad = np.diff(padded) / dx
    return float(np.sum(grad * grad) * dx)


def verify_chain(grid: PotentialGrid) -> RearrangementReport:
    """Solve for the ground state, rearrange it and the potential, and
    report both sides of each comparison. Asserts nothing."""
    op = discretize(grid)
    pair = smallest_eigenpair(op)
    dx = op.dx
    f = pair.f
    V = grid.values[1:-1]

    f_star = symmetric_decreasing(f, dx)
    v_star = symmetric_increasing(V, dx)

    hl_left = float(np.sum(V * f * f) * dx)
    hl_right = float(np.sum(v_star * f_star * f_star) * dx)
    ps_left = _gradient_energy(f_star, dx)
    ps_right = _gradient_energy(f, dx)

    boundary = float(grid.values.max())
    star_values = np.concatenate(([boundary], v_star, [boundary]))
    grid_star = PotentialGrid(a=grid.a, b=grid.b, values=star_values, cap=grid.cap)
    lambda_star = smallest_eigenpair(discretize(grid_star)).lambda1

    return RearrangementReport(
        hlLeft=hl_left,
        hlRight=hl_right,
        psLeft=ps_left,
        psRight=ps_right,
        lambdaOriginal=pair.lambda1,
        lambdaRearranged=lambda_star,
    )
