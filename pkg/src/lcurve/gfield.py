"""Primitive of g, the g-position vector field and frame decompositions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch
from .expr import as_scalar_fn
from .frenet import FrameKind, FrenetData
from .metric import lorentz_inner
from .numerics import cumulative_integral, grid_index


@dataclass(frozen=True)
class GFieldTrace:
    """``xi_g(s) = xi0 + int_{s0}^s g(u) T(u) du`` sampled on a grid.

    ``tangent`` keeps the T used as integrand; ``derivative_residual`` is the
    largest interior mismatch between the centred difference of ``xi_g`` and
    ``g T``.
    """

    s_grid: np.ndarray
    G_values: np.ndarray
    xi_g: np.ndarray
    s0: float
    g_values: np.ndarray
    tangent: np.ndarray
    derivative_residual: float = 0.0

    @property
    def base_index(self):
        return grid_index(self.s_grid, self.s0)


@dataclass(frozen=True)
class ComponentProfile:
    """Coefficients of ``xi_g`` along a frame.

    ``basis_kind`` is ``"rectifying"`` for (w0, w1..w_{n-2}) on
    (T, B1..B_{n-2}), ``"normal"`` for (theta, mu1..mu_{n-2}) on
    (N, B1..B_{n-2}), or ``"frame"`` for one coefficient per frame vector.
    """

    s_grid: np.ndarray
    coeffs: np.ndarray
    basis_kind: str

    def names(self):
        k = self.coeffs.shape[1]
        if self.basis_kind == "rectifying":
            return [f"w{i}" for i in range(k)]
        if self.basis_kind == "normal":
            return ["theta"] + [f"mu{i}" for i in range(1, k)]
        return [f"c{i}" for i in range(k)]


def primitive_G(g, s0, s_grid, G0=0.0):
    """Running integral of ``g`` from ``s0`` with ``G(s0) = G0``.

    ``s0`` must be a grid node. Simpson's rule on every grid interval, with
    ``g`` evaluated at the interval midpoints. The error is fourth order and
    varies smoothly from node to node, so finite differences of ``G`` keep
    that order (node-only Simpson leaves an alternating error that a
    derivative amplifies by 1/h).
    """
    g = as_scalar_fn(g)
    s_grid = np.asarray(s_grid, dtype=float)
    i0 = grid_index(s_grid, s0)
    mid = 0.5 * (s_grid[1:] + s_grid[:-1])
    f = np.broadcast_to(g(s_grid), s_grid.shape)
    fm = np.broadcast_to(g(mid), mid.shape)
    pieces = np.diff(s_grid) / 6.0 * (f[:-1] + 4.0 * fm + f[1:])
    full = np.concatenate([[0.0], np.cumsum(pieces)])
    return G0 + (full - full[i0])


def g_position_vector(trace, fd: FrenetData, g, s0=None, xi0=None):
    """Integrate ``g T`` along the curve. ``s0`` defaults to the first node."""
    g = as_scalar_fn(g)
    s = np.asarray(fd.s_grid)
    if trace is not None and (len(trace.s_grid) != len(s) or np.any(trace.s_grid != s)):
        raise GridMismatch("trace and frames are sampled on different grids")
    s0 = float(s[0]) if s0 is None else float(s0)
    i0 = grid_index(s, s0)
    gv = np.broadcast_to(g(s), s.shape).astype(float)
    T = fd.T
    xi = cumulative_integral(gv[:, None] * T, s, i0)
    if xi0 is not None:
        xi = xi + np.asarray(xi0, dtype=float)
    G = cumulative_integral(gv, s, i0)
    dres = 0.0
    if len(s) >= 3:
        central = (xi[2:] - xi[:-2]) / (s[2:] - s[:-2])[:, None]
        dres = float(np.max(np.linalg.norm(central - gv[1:-1, None] * T[1:-1], axis=1)))
    return GFieldTrace(s, G, xi, s0, gv, T.copy(), dres)


def decompose_in_frame(xi, frame, kind=FrameKind.SPACELIKE, sigs=()):
    """Coefficients ``c`` with ``xi = sum_i c_i frame_i`` (frame order T, N, B1, ...).

    Works on one node (``frame`` of shape (n, n)) or a stack of nodes.
    Spacelike frames: ``c_i = eta_i <xi, E_i>`` with eta = (1, eps...).
    Null frames swap the T and B1 pairings.
    """
    xi = np.asarray(xi, dtype=float)
    frame = np.asarray(frame, dtype=float)
    pair = lorentz_inner(xi[..., None, :], frame)
    if FrameKind(kind) is FrameKind.SPACELIKE:
        eta = np.array([1.0] + [float(e) for e in sigs])
        return pair * eta
    out = pair.copy()
    out[..., 0], out[..., 2] = pair[..., 2], pair[..., 0]
    return out


def frame_coefficients(xi, fd: FrenetData):
    return decompose_in_frame(xi, fd.frames, fd.kind, fd.sigs)


def component_profile(xi, fd: FrenetData, basis_kind="rectifying"):
    full = frame_coefficients(xi, fd)
    if basis_kind == "rectifying":
        coeffs = np.concatenate([full[:, :1], full[:, 2:]], axis=1)
    elif basis_kind == "normal":
        coeffs = full[:, 1:]
    elif basis_kind == "frame":
        coeffs = full
    else:
        raise ValueError(f"unknown basis kind {basis_kind!r}")
    return ComponentProfile(np.asarray(fd.s_grid), coeffs, basis_kind)


def reconstruct(profile: ComponentProfile, fd: FrenetData):
    """``sum_i coeff_i basis_i`` at every node."""
    if profile.basis_kind == "rectifying":
        basis = np.concatenate([fd.frames[:, :1], fd.frames[:, 2:]], axis=1)
    elif profile.basis_kind == "normal":
        basis = fd.frames[:, 1:]
    else:
        basis = fd.frames
    return np.einsum("mk,mkn->mn", profile.coeffs, basis)
