"""Finite-difference derivatives and cumulative quadrature on 1-D grids."""
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import GridMismatch


def is_uniform(s, rtol=1e-6):
    d = np.diff(s)
    return bool(np.all(np.abs(d - d.mean()) <= rtol * abs(d.mean())))


@lru_cache(maxsize=None)
def fd_weights(offsets, deriv=1):
    """Weights ``w`` with ``f^(deriv)(0) ~ sum_j w_j f(offsets_j)`` on a unit grid."""
    x = np.asarray(offsets, dtype=float)
    k = np.arange(len(x))
    A = x[None, :] ** k[:, None]
    rhs = np.zeros(len(x))
    rhs[deriv] = float(np.prod(np.arange(1, deriv + 1)))
    return tuple(np.linalg.solve(A, rhs))


def derivative(values, s, accuracy=8, spacing=None):
    """d/ds of ``values`` (first axis indexed by node) on the grid ``s``.

    Uses centred stencils of the given even ``accuracy`` order, shifted to one
    side near the ends. ``spacing`` sets the distance between stencil points;
    it is rounded to a multiple of the grid step (default: the grid step).
    Larger spacing trades truncation error for less roundoff amplification,
    which matters when derivatives are nested. Non-uniform grids fall back to
    second-order ``numpy.gradient``.
    """
    values = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    m = len(s)
    if values.shape[0] != m:
        raise GridMismatch(f"{values.shape[0]} values on a grid of {m} nodes")
    p = min(accuracy // 2, (m - 2) // 2)
    if p < 1 or not is_uniform(s):
        return np.gradient(values, s, axis=0, edge_order=2 if m >= 3 else 1)
    h = (s[-1] - s[0]) / (m - 1)
    stride = 1 if spacing is None else max(1, int(round(spacing / h)))
    stride = max(1, min(stride, (m - 1) // (2 * p + 1)))
    idx = np.arange(m)
    lo = np.clip(-p, -(idx // stride), (m - 1 - idx) // stride - 2 * p)
    out = np.empty_like(values)
    for shift in np.unique(lo):
        nodes = idx[lo == shift]
        offsets = tuple(range(int(shift), int(shift) + 2 * p + 1))
        w = fd_weights(offsets)
        acc = np.zeros((len(nodes),) + values.shape[1:])
        for o, wj in zip(offsets, w):
            acc += wj * values[nodes + o * stride]
        out[nodes] = acc / (stride * h)
    return out


def cumulative_integral(values, s, base_index=0):
    """Running integral of ``values`` from ``s[base_index]`` (composite Simpson)."""
    values = np.asarray(values, dtype=float)
    s = np.asarray(s, dtype=float)
    if len(s) < 3:
        full = np.concatenate([np.zeros((1,) + values.shape[1:]),
                               np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(s).reshape(
                                   (-1,) + (1,) * (values.ndim - 1)), axis=0)])
    else:
        full = cumulative_simpson(values, x=s, axis=0, initial=0.0)
    return full - full[base_index]


def grid_index(s_grid, s0, rtol=1e-9):
    """Index of node ``s0`` in ``s_grid``; raises GridMismatch when absent."""
    s_grid = np.asarray(s_grid)
    i = int(np.argmin(np.abs(s_grid - s0)))
    span = max(1.0, float(np.ptp(s_grid)))
    if abs(s_grid[i] - s0) > rtol * span:
        raise GridMismatch(f"base point s0={s0} is not a grid node")
    return i
