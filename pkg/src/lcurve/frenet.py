"""Frenet apparatus of spacelike and null curves in Lorentzian n-space.

Frame vectors are stored as rows, in the order ``T, N, B1, ..., B_{n-2}``.

Spacelike frames satisfy ``<T,T> = 1``, ``<N,N> = eps_1``,
``<B_i,B_i> = eps_{i+1}`` and

    T'   = k1 N
    N'   = -eps1 k1 T + k2 B1
    B_i' = -eps_i eps_{i+1} k_{i+1} B_{i-1} + k_{i+2} B_{i+1}

Null frames satisfy ``<T,T> = <B1,B1> = 0``, ``<T,B1> = 1``, all other
vectors spacelike unit, and

    T'   = N
    N'   = k1 T - B1
    B1'  = -k1 N + k2 B2
    B2'  = -k2 T + k3 B3
    B_i' = -k_i B_{i-1} + k_{i+1} B_{i+1}        (i >= 3)

with the trailing term dropped on the last vector. A null curve in L^n has
n-2 curvatures.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import (
    DegenerateCurvature,
    DriftExceeded,
    NotUnitSpeed,
    NullResidual,
    SpecError,
)
from .expr import ScalarFn, as_scalar_fn
from .metric import DEFAULT_CAUSAL_TOL, lorentz_inner, metric_diag
from .numerics import derivative

CURVATURE_THRESHOLD = 1e-8
FRAME_TOL = 1e-8
DEFAULT_STENCIL_SPACING = 0.04


class FrameKind(Enum):
    SPACELIKE = "spacelike"
    NULL = "null"


def n_curvatures(dim, kind):
    return dim - 1 if FrameKind(kind) is FrameKind.SPACELIKE else dim - 2


@dataclass(frozen=True)
class CurveTrace:
    """Sampled curve: ``points[k]`` is the position at ``s_grid[k]``."""

    s_grid: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 2 or p.shape[0] != s.shape[0]:
            raise SpecError("points must have shape (len(s_grid), n)")
        if p.shape[1] < 2:
            raise SpecError("dimension must be at least 2")
        if len(s) < 4:
            raise SpecError("a curve trace needs at least 4 nodes")
        if np.any(np.diff(s) <= 0):
            raise SpecError("s_grid must be strictly increasing")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(p))):
            raise SpecError("trace contains non-finite values")
        object.__setattr__(self, "s_grid", s)
        object.__setattr__(self, "points", p)

    @property
    def dim(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class FrenetData:
    s_grid: np.ndarray
    frames: np.ndarray  # (nodes, n, n): frames[k, i] is the i-th frame vector at node k
    curvatures: np.ndarray  # (nodes, n-1) spacelike, (nodes, n-2) null
    sigs: tuple
    kind: FrameKind
    kappa_fns: tuple | None = None
    drift: float | None = None

    @property
    def dim(self):
        return self.frames.shape[1]

    @property
    def T(self):
        return self.frames[:, 0]

    @property
    def N(self):
        return self.frames[:, 1]

    def B(self, i):
        """The i-th binormal, 1-based as in the Frenet equations."""
        return self.frames[:, i + 1]

    def expected_gram(self):
        return expected_gram(self.dim, self.kind, self.sigs)

    def transformed(self, L):
        """Frames and data after applying the linear map ``L`` to every vector."""
        return FrenetData(self.s_grid, self.frames @ L.T, self.curvatures, self.sigs,
                          self.kind, self.kappa_fns, self.drift)


@dataclass(frozen=True)
class CurvatureSpec:
    """Input to :func:`synthesize_from_curvatures`.

    ``sigs`` holds eps_1..eps_{n-1} for spacelike curves and must contain
    exactly one -1 (an orthonormal frame of L^n has exactly one timelike
    vector). It is ignored for null curves. ``step`` is adjusted down so that
    it divides the range exactly.
    """

    kappas: tuple
    dim: int
    s_range: tuple
    step: float
    kind: FrameKind = FrameKind.SPACELIKE
    sigs: tuple | None = None
    initial_frame: np.ndarray | None = None
    origin: np.ndarray | None = None
    require_nonvanishing: bool = True
    drift_tol: float = 1e-6
    frame_tol: float = FRAME_TOL
    renormalize: bool = True
    _fns: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kind = FrameKind(self.kind)
        object.__setattr__(self, "kind", kind)
        n = int(self.dim)
        if n < 3:
            raise SpecError("dim: must be at least 3")
        want = n_curvatures(n, kind)
        if len(self.kappas) != want:
            raise SpecError(f"kappa: expected {want} curvature functions for a {kind.value} curve in L^{n}, "
                            f"got {len(self.kappas)}")
        a, b = map(float, self.s_range)
        if not a < b:
            raise SpecError("range: lower end must be below upper end")
        if not self.step > 0:
            raise SpecError("step: must be positive")
        if kind is FrameKind.SPACELIKE:
            object.__setattr__(self, "sigs", validate_sigs(self.sigs, n))
        object.__setattr__(self, "_fns", tuple(as_scalar_fn(k) for k in self.kappas))

    @property
    def kappa_fns(self):
        return self._fns

    def grid(self):
        a, b = map(float, self.s_range)
        K = max(3, int(round((b - a) / self.step)))
        return np.linspace(a, b, K + 1)


def validate_sigs(sigs, n):
    if sigs is None:
        raise SpecError("sig: spacelike curves need n-1 signatures")
    sigs = tuple(int(e) for e in sigs)
    if len(sigs) != n - 1:
        raise SpecError(f"sig: expected {n - 1} signatures, got {len(sigs)}")
    if any(e not in (-1, 1) for e in sigs):
        raise SpecError("sig: every signature must be +1 or -1")
    if sigs.count(-1) != 1:
        raise SpecError("sig: exactly one signature must be -1 (L^n has index 1)")
    return sigs


def expected_gram(n, kind, sigs=None):
    kind = FrameKind(kind)
    if kind is FrameKind.SPACELIKE:
        return np.diag([1.0] + [float(e) for e in sigs])
    G = np.eye(n)
    G[0, 0] = G[2, 2] = 0.0
    G[0, 2] = G[2, 0] = 1.0
    return G


def default_initial_frame(n, kind, sigs=None):
    """Standard starting frame.

    Spacelike: the timelike frame vector takes e1 and the others take
    e2, e3, ... in order (so with B_{n-2} timelike: T=e2, N=e3, ...).
    Null: T=(1,1,0,..), B1=(-1,1,0,..)/2, N=e3, B_j=e_{j+2}.
    """
    kind = FrameKind(kind)
    F = np.zeros((n, n))
    if kind is FrameKind.SPACELIKE:
        timelike = 1 + list(sigs).index(-1)
        coord = 1
        for k in range(n):
            if k == timelike:
                F[k, 0] = 1.0
            else:
                F[k, coord] = 1.0
                coord += 1
        return F
    F[0, :2] = (1.0, 1.0)
    F[2, :2] = (-0.5, 0.5)
    for k in (1,) + tuple(range(3, n)):
        F[k, k if k >= 3 else 2] = 1.0
    return F


def generator(kappa, n, kind, sigs=None):
    """Matrices ``M`` with ``Y' = M Y`` for stacked rows ``[frame; position]``.

    ``kappa`` has shape (ncurv, m); the result has shape (m, n+1, n+1).
    """
    m = kappa.shape[1]
    M = np.zeros((m, n + 1, n + 1))
    M[:, n, 0] = 1.0
    if FrameKind(kind) is FrameKind.SPACELIKE:
        eta = [1.0] + [float(e) for e in sigs]
        for k in range(n):
            if k + 1 <= n - 1:
                M[:, k, k + 1] = kappa[k]
            if k >= 1:
                M[:, k, k - 1] = -eta[k - 1] * eta[k] * kappa[k - 1]
        return M
    M[:, 0, 1] = 1.0
    M[:, 1, 0] = kappa[0]
    M[:, 1, 2] = -1.0
    M[:, 2, 1] = -kappa[0]
    if n >= 4:
        M[:, 2, 3] = kappa[1]
        M[:, 3, 0] = -kappa[1]
        if n >= 5:
            M[:, 3, 4] = kappa[2]
    for i in range(3, n - 1):  # B_i sits in row i+1
        M[:, i + 1, i] = -kappa[i - 1]
        if i + 2 <= n - 1:
            M[:, i + 1, i + 2] = kappa[i]
    return M


def _gram(frames):
    """Per-node Gram matrices of stacked frames, shape (m, n, n)."""
    J = metric_diag(frames.shape[-1])
    return np.einsum("mik,k,mjk->mij", frames, J, frames)


def frame_residuals_per_node(fd):
    return np.abs(_gram(fd.frames) - fd.expected_gram())


def frame_residuals(fd):
    """Max over nodes of ``|<frame_i, frame_j> - expected_ij|``, as an (n, n) matrix."""
    return frame_residuals_per_node(fd).max(axis=0)


def synthesize_from_curvatures(spec: CurvatureSpec):
    """Integrate the Frenet system for prescribed curvatures.

    Returns ``(CurveTrace, FrenetData)``. The frame is advanced with classical
    RK4 and re-normalized at every node; ``FrenetData.drift`` accumulates the
    per-step metric defect measured before re-normalization.
    """
    n, kind = spec.dim, spec.kind
    s = spec.grid()
    K = len(s) - 1
    h = (s[-1] - s[0]) / K
    s_all = np.linspace(s[0], s[-1], 2 * K + 1)
    kappa_all = np.array([np.broadcast_to(f(s_all), s_all.shape) for f in spec.kappa_fns], dtype=float)
    if spec.require_nonvanishing:
        for i, row in enumerate(kappa_all):
            bad = np.flatnonzero(np.abs(row) < CURVATURE_THRESHOLD)
            if bad.size:
                raise SpecError(f"kappa: curvature {i + 1} vanishes at s={s_all[bad[0]]:.17g}")
    G = expected_gram(n, kind, spec.sigs)
    if spec.initial_frame is None:
        F0 = default_initial_frame(n, kind, spec.sigs)
    else:
        F0 = np.asarray(spec.initial_frame, dtype=float)
        if F0.shape != (n, n) or np.max(np.abs(_gram(F0[None])[0] - G)) > 1e-10:
            raise SpecError("initial_frame: Gram matrix does not match the frame kind/signatures")
    x0 = np.zeros(n) if spec.origin is None else np.asarray(spec.origin, dtype=float)
    Y0 = np.ascontiguousarray(np.vstack([F0, x0[None]]))
    M = np.ascontiguousarray(generator(kappa_all, n, kind, spec.sigs))
    Y, defects, status, bad = kernels.integrate_frames(
        M, Y0, h, np.ascontiguousarray(G), kind is FrameKind.NULL, spec.renormalize)
    if status != kernels.STATUS_OK:
        raise DriftExceeded(f"frame lost its signature at node {bad}", node=int(bad))
    drift = float(defects.sum()) if spec.renormalize else float(defects.max(initial=0.0))
    trace = CurveTrace(s, Y[:, n])
    fd = FrenetData(s, Y[:, :n].copy(), kappa_all[:, ::2].T.copy(),
                    tuple(spec.sigs) if spec.sigs is not None else (), kind, spec.kappa_fns, drift)
    if spec.renormalize:
        res = frame_residuals_per_node(fd).max(axis=(1, 2))
        worst = int(np.argmax(res))
        if res[worst] > spec.frame_tol:
            raise DriftExceeded(f"frame residual {res[worst]:.3g} exceeds {spec.frame_tol:g}", node=worst)
        if drift > spec.drift_tol:
            raise DriftExceeded(f"accumulated metric drift {drift:.3g} exceeds {spec.drift_tol:g}",
                                node=int(np.argmax(defects)) + 1)
    return trace, fd


# --------------------------------------------------------------------------
# frames from sampled curves


def _project_out(v, basis, G_sub):
    """Remove from ``v`` its components along the (nondegenerate) span of ``basis``."""
    if not basis:
        return v
    B = np.stack(basis, axis=1)  # (m, k, n)
    pair = lorentz_inner(v[:, None, :], B)  # (m, k)
    coef = pair @ np.linalg.inv(G_sub).T
    return v - np.einsum("mk,mkn->mn", coef, B)


def _complete(basis):
    """Unit vector orthogonal to every vector in ``basis`` (per node)."""
    B = np.stack(basis, axis=1)  # (m, n-1, n)
    J = metric_diag(B.shape[-1])
    _, _, vt = np.linalg.svd(B * J, full_matrices=True)
    c = vt[:, -1, :]
    q = lorentz_inner(c, c)
    c = c / np.sqrt(np.abs(q))[:, None]
    full = np.concatenate([B, c[:, None, :]], axis=1)
    c = c * np.sign(np.linalg.det(full))[:, None]
    return c, np.sign(q)


def frenet_from_trace(trace: CurveTrace, kind=FrameKind.SPACELIKE, tol=1e-6,
                      causal_tol=DEFAULT_CAUSAL_TOL, speed_tol=1e-5,
                      stencil_spacing=DEFAULT_STENCIL_SPACING):
    """Recover frames and curvatures from a sampled arc-length curve.

    Each frame vector is the pseudo-Gram-Schmidt residual of the derivative
    of its predecessor; the curvature is the Lorentzian length of that
    residual. The last frame vector completes the basis (so a vanishing last
    curvature, as for a planar circle, is reported as zero rather than as an
    error). Derivatives use 8th-order stencils spaced ``stencil_spacing``
    apart; accuracy degrades near the two ends of the trace.

    Raises
    ------
    NotUnitSpeed
        ``<T,T>`` departs from 1 (spacelike) or 0 (null) by more than
        ``speed_tol``, or ``<T',T'> != 1`` for a null curve.
    DegenerateCurvature
        A curvature needed to build the frame falls below ``tol``.
    NullResidual
        A residual is null, or changes causal character along the curve.
    """
    kind = FrameKind(kind)
    s, x = trace.s_grid, trace.points
    n = trace.dim

    def D(v):
        return derivative(v, s, accuracy=8, spacing=stencil_spacing)

    T = D(x)
    speed = lorentz_inner(T, T)
    if kind is FrameKind.SPACELIKE:
        off = np.abs(speed - 1.0)
        if off.max() > speed_tol:
            k = int(np.argmax(off))
            raise NotUnitSpeed(f"<T,T> = {speed[k]:.6g} at node {k}; expected 1", node=k)
        T = T / np.sqrt(speed)[:, None]
        return _spacelike_frames(s, T, D, n, tol, causal_tol)
    off = np.abs(speed) / np.maximum(1.0, np.sum(T * T, axis=1))
    if off.max() > speed_tol:
        k = int(np.argmax(off))
        raise NotUnitSpeed(f"<T,T> = {speed[k]:.6g} at node {k}; expected 0", node=k)
    return _null_frames(s, T, D, n, tol, speed_tol)


def _check_residual(r, index, tol, causal_tol):
    size = np.linalg.norm(r, axis=1)
    small = np.flatnonzero(size <= tol)
    if small.size:
        k = int(small[0])
        raise DegenerateCurvature(f"curvature {index} vanishes at node {k}", node=k, index=index)
    q = lorentz_inner(r, r)
    null = np.flatnonzero(np.abs(q) <= causal_tol * size ** 2)
    if null.size:
        k = int(null[0])
        raise NullResidual(f"frame vector {index} is null at node {k}", node=k)
    if not (np.all(q > 0) or np.all(q < 0)):
        k = int(np.flatnonzero(np.sign(q) != np.sign(q[0]))[0])
        raise NullResidual(f"frame vector {index} changes causal character at node {k}", node=k)
    return q


def _spacelike_frames(s, T, D, n, tol, causal_tol):
    E, eta, kap = [T], [1.0], []
    for k in range(1, n):
        v = D(E[k - 1])
        if k < n - 1:
            r = _project_out(v, E, np.diag(eta))
            q = _check_residual(r, k, tol, causal_tol)
            kap.append(np.sqrt(np.abs(q)))
            E.append(r / kap[-1][:, None])
            eta.append(float(np.sign(q[0])))
        else:
            c, sign = _complete(E)
            if not (np.all(sign > 0) or np.all(sign < 0)):
                raise NullResidual("last frame vector changes causal character")
            e_last = float(sign[0])
            k_last = e_last * lorentz_inner(v, c)
            if np.median(k_last) < 0:
                c, k_last = -c, -k_last
            E.append(c)
            eta.append(e_last)
            kap.append(k_last)
    frames = np.stack(E, axis=1)
    return FrenetData(s, frames, np.stack(kap, axis=1), tuple(int(e) for e in eta[1:]), FrameKind.SPACELIKE)


def _null_frames(s, T, D, n, tol, speed_tol):
    N = D(T)
    nn = lorentz_inner(N, N)
    off = np.abs(nn - 1.0)
    if off.max() > speed_tol:
        k = int(np.argmax(off))
        raise NotUnitSpeed(f"<T',T'> = {nn[k]:.6g} at node {k}; null curves need pseudo-arc parameter",
                           node=k)
    dN = D(N)
    k1 = -0.5 * lorentz_inner(dN, dN)
    B1 = k1[:, None] * T - dN
    E = [T, N, B1]
    kap = [k1]
    G = expected_gram(n, FrameKind.NULL)
    # kappa_j B_j = B_{j-1}' + (term restoring the Frenet relation)
    for j in range(2, n - 1):
        prev = E[j]  # B_{j-1}
        v = D(prev)
        if j == 2:
            v = v + kap[0][:, None] * N
        elif j == 3:
            v = v + kap[1][:, None] * T
        else:
            v = v + kap[j - 2][:, None] * E[j - 1]
        if j < n - 2:
            r = _project_out(v, E, G[: j + 1, : j + 1])
            q = _check_residual(r, j, tol, DEFAULT_CAUSAL_TOL)
            kap.append(np.sqrt(np.abs(q)))
            E.append(r / kap[-1][:, None])
        else:
            c, _ = _complete(E)
            k_last = lorentz_inner(v, c)
            if np.median(k_last) < 0:
                c, k_last = -c, -k_last
            E.append(c)
            kap.append(k_last)
    frames = np.stack(E, axis=1)
    return FrenetData(s, frames, np.stack(kap, axis=1), (), FrameKind.NULL)
