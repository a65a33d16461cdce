"""Coefficient profiles forced by the g-rectifying and g-normal conditions.

Write ``xi_g = sum_j c_j E_j`` in the frame ``E = (T, N, B1, ...)`` with
``E' = M E`` (:func:`lcurve.frenet.generator`). Differentiating and using
``xi_g' = g T`` gives, row by row,

    c_j' + sum_k M[k, j] c_k = g * delta_{j0}.

A rectifying profile sets ``c_N = 0``; a normal one sets ``c_T = 0``. Every
row but the last then determines the next coefficient, and the last row is a
closure condition that the data must satisfy. The profiles are built from
these rows, and the closure mismatch is reported rather than raised.

Coefficients are kept as affine terms ``a X + b``. The unknown ``X`` is the
primitive ``G`` (with ``G' = g``) for spacelike rectifying curves, or the
constant ``c1`` for null ones. ``a`` and ``b`` are symbolic when every
curvature is an analytic :class:`~lcurve.expr.ScalarFn`, and sampled arrays
otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as E
from .errors import CurvatureZero, SpecError
from .expr import as_scalar_fn
from .frenet import CURVATURE_THRESHOLD, FrameKind, FrenetData, generator
from .gfield import ComponentProfile, decompose_in_frame, primitive_G
from .numerics import cumulative_integral, derivative, grid_index

FD_ACCURACY = 8


class Field:
    """A scalar function of ``s``: an expression tree or samples on a grid."""

    __slots__ = ("ast", "values", "s")

    def __init__(self, s, ast=None, values=None):
        self.s = s
        self.ast = ast
        self.values = None if values is None else np.asarray(values, dtype=float)

    @classmethod
    def const(cls, s, x):
        return cls(s, ast=E.num(x))

    @classmethod
    def of(cls, s, f):
        """Wrap a ScalarFn, a constant or an array of samples."""
        if isinstance(f, Field):
            return f
        if isinstance(f, E.ScalarFn):
            return cls(s, ast=f.ast)
        if np.ndim(f) == 0:
            return cls.const(s, float(f))
        return cls(s, values=f)

    @property
    def symbolic(self):
        return self.ast is not None

    def sample(self):
        if self.symbolic:
            return np.broadcast_to(E.evaluate(self.ast, self.s), self.s.shape).astype(float)
        return self.values

    def _binary(self, other, sym, op):
        other = Field.of(self.s, other)
        if self.symbolic and other.symbolic:
            return Field(self.s, ast=sym(self.ast, other.ast))
        return Field(self.s, values=op(self.sample(), other.sample()))

    def __add__(self, o):
        return self._binary(o, E.add, np.add)

    def __sub__(self, o):
        return self._binary(o, E.sub, np.subtract)

    def __mul__(self, o):
        return self._binary(o, E.mul, np.multiply)

    def __truediv__(self, o):
        return self._binary(o, E.div, np.divide)

    def __neg__(self):
        if self.symbolic:
            return Field(self.s, ast=E.neg(self.ast))
        return Field(self.s, values=-self.values)

    def is_zero(self):
        return self.symbolic and E.const_value(self.ast) == 0.0

    def d(self):
        if self.symbolic:
            return Field(self.s, ast=E.differentiate(self.ast))
        return Field(self.s, values=derivative(self.values, self.s, FD_ACCURACY))


@dataclass
class Affine:
    """``a * X + b`` with ``X' = dX``."""

    a: Field
    b: Field

    def d(self, dX):
        if dX.is_zero() or self.a.is_zero():
            return Affine(self.a.d(), self.b.d())
        return Affine(self.a.d(), self.a * dX + self.b.d())

    def __add__(self, o):
        return Affine(self.a + o.a, self.b + o.b)

    def scale(self, f):
        return Affine(self.a * f, self.b * f)

    def value(self, X):
        return self.a.sample() * X + self.b.sample()


@dataclass(frozen=True)
class RectifyingProfile(ComponentProfile):
    """``(w0, w1, .., w_{n-2})`` on ``(T, B1, .., B_{n-2})`` plus the primitive.

    ``frame_coeffs`` keeps one coefficient per frame vector (zero on N);
    ``closure_residual`` is the mismatch of the last Frenet row.
    """

    G_values: np.ndarray = None
    frame_coeffs: np.ndarray = None
    closure_residual: np.ndarray = None
    c1: float | None = None
    notes: list = field(default_factory=list)


@dataclass(frozen=True)
class NormalProfile(ComponentProfile):
    """``(theta, mu1, .., mu_{n-2})`` on ``(N, B1, .., B_{n-2})``."""

    frame_coeffs: np.ndarray = None
    closure_residual: np.ndarray = None
    notes: list = field(default_factory=list)


# --------------------------------------------------------------------------
# helpers


def kappa_fields(fd: FrenetData):
    """Curvatures as Fields, symbolic when analytic functions are attached."""
    s = np.asarray(fd.s_grid)
    if fd.kappa_fns is not None:
        return [Field.of(s, as_scalar_fn(f)) for f in fd.kappa_fns]
    return [Field(s, values=fd.curvatures[:, i]) for i in range(fd.curvatures.shape[1])]


def check_curvatures(fd: FrenetData, count=None, tol=CURVATURE_THRESHOLD):
    """Raise CurvatureZero if one of the first ``count`` curvatures vanishes."""
    kap = fd.curvatures if count is None else fd.curvatures[:, :count]
    for i in range(kap.shape[1]):
        bad = np.flatnonzero(np.abs(kap[:, i]) < tol)
        if bad.size:
            raise CurvatureZero(f"kappa{i + 1} vanishes at s={fd.s_grid[bad[0]]:.17g}",
                                node=int(bad[0]))


def check_g(g, s):
    gv = np.broadcast_to(g(s), s.shape)
    bad = np.flatnonzero(gv == 0.0)
    if bad.size:
        raise SpecError(f"g: must be nowhere zero on the grid (vanishes at s={s[bad[0]]:.17g})")
    return gv.astype(float)


def frame_generator(fd: FrenetData):
    return generator(fd.curvatures.T, fd.dim, fd.kind, fd.sigs)


def system_residuals(coeffs, fd: FrenetData, g, accuracy=4):
    """Per-row residuals ``c_j' + sum_k M[k, j] c_k - g delta_{j0}`` at every node.

    ``coeffs`` holds one coefficient per frame vector, shape (m, n). The
    derivative is a stride-one finite difference of the given order, so the
    residual of an exact profile decays like ``h**accuracy``.
    """
    s = np.asarray(fd.s_grid)
    coeffs = np.asarray(coeffs, dtype=float)
    gv = np.broadcast_to(as_scalar_fn(g)(s), s.shape)
    M = frame_generator(fd)
    res = derivative(coeffs, s, accuracy) + np.einsum("mkj,mk->mj", M[:, :-1, :-1], coeffs)
    res[:, 0] -= gv
    return res


def _eta(fd):
    return [1.0] + [float(e) for e in fd.sigs]


# --------------------------------------------------------------------------
# spacelike rectifying


def _spacelike_chain(fd, c0, c1, dX):
    """Forward recurrence ``c_{j+1} = (c_j' + k_j c_{j-1}) / (eta_j eta_{j+1} k_{j+1})``."""
    n = fd.dim
    kap = kappa_fields(fd)
    eta = _eta(fd)
    c = [c0, c1]
    for j in range(1, n - 1):
        num = c[j].d(dX) + c[j - 1].scale(kap[j - 1])
        c.append(num.scale(Field.const(fd.s_grid, 1.0) / (kap[j] * (eta[j] * eta[j + 1]))))
    closure = c[n - 1].d(dX) + c[n - 2].scale(kap[n - 2])
    return c, closure


def rectifying_terms(fd: FrenetData, g):
    """Affine terms of every frame coefficient in ``X = G`` (spacelike rectifying)."""
    s = np.asarray(fd.s_grid)
    one, zero = Field.const(s, 1.0), Field.const(s, 0.0)
    dX = Field.of(s, as_scalar_fn(g))
    return _spacelike_chain(fd, Affine(one, zero), Affine(zero, zero), dX)


def rectifying_coeffs_spacelike(fd: FrenetData, g, s0=None, G0=0.0):
    """Coefficients of a spacelike g-rectifying field along ``fd``.

    ``w0 = G`` with ``G(s0) = G0``, and the binormal coefficients follow from
    the Frenet rows. The closure (last row) mismatch is returned in
    ``closure_residual``.
    """
    if FrameKind(fd.kind) is not FrameKind.SPACELIKE:
        raise SpecError("kind: spacelike frames required")
    g = as_scalar_fn(g)
    s = np.asarray(fd.s_grid)
    s0 = float(s[0]) if s0 is None else float(s0)
    check_g(g, s)
    check_curvatures(fd)
    G = primitive_G(g, s0, s, G0)
    terms, closure = rectifying_terms(fd, g)
    full = np.stack([t.value(G) for t in terms], axis=1)
    w = np.concatenate([full[:, :1], full[:, 2:]], axis=1)
    return RectifyingProfile(s, w, "rectifying", G_values=G, frame_coeffs=full,
                             closure_residual=closure.value(G))


# --------------------------------------------------------------------------
# spacelike normal


def normal_terms(fd: FrenetData, g):
    s = np.asarray(fd.s_grid)
    zero = Field.const(s, 0.0)
    kap = kappa_fields(fd)
    gf = Field.of(s, as_scalar_fn(g))
    theta = -gf / (kap[0] * _eta(fd)[1])
    return _spacelike_chain(fd, Affine(zero, zero), Affine(zero, theta), zero)


def normal_coeffs(fd: FrenetData, g):
    """Coefficients ``(theta, mu1, ..)`` of a g-normal field along ``fd``."""
    if FrameKind(fd.kind) is not FrameKind.SPACELIKE:
        raise SpecError("kind: spacelike frames required")
    g = as_scalar_fn(g)
    s = np.asarray(fd.s_grid)
    check_g(g, s)
    check_curvatures(fd)
    terms, closure = normal_terms(fd, g)
    full = np.stack([t.value(0.0) for t in terms], axis=1)
    return NormalProfile(s, full[:, 1:], "normal", frame_coeffs=full,
                         closure_residual=closure.value(0.0))


# --------------------------------------------------------------------------
# null rectifying


def null_rectifying_terms(fd: FrenetData, g):
    """Affine terms in ``X = c1`` (constant) for the null rectifying profile.

    Frame order is (T, N, B1, B2, ..); ``c_N = 0`` and ``c_B1 = c1``. Row N
    gives ``c_T = k1 c1``, row T gives ``c_B2``, row ``B_i`` gives
    ``c_{B_{i+1}}``; the last row closes the system.
    """
    n = fd.dim
    s = np.asarray(fd.s_grid)
    one, zero = Field.const(s, 1.0), Field.const(s, 0.0)
    kap = kappa_fields(fd)
    gf = Field.of(s, as_scalar_fn(g))
    c1 = Affine(one, zero)
    cT = c1.scale(kap[0])
    c = [cT, Affine(zero, zero), c1]
    if n == 3:
        closure = cT.d(zero) + Affine(zero, -gf)
        return c, closure
    # row T: c_T' + k1 c_N - k2 c_B2 = g
    inv = one / kap[1]
    c.append((cT.d(zero) + Affine(zero, -gf)).scale(inv))
    # row B_i (i >= 2, frame index i+1): c_Bi' + k_i c_B{i-1} - k_{i+1} c_B{i+1} = 0,
    # with the B2 row coupling to c_B1 through k2.
    for i in range(2, n - 2):
        nxt = (c[i + 1].d(zero) + c[i].scale(kap[i - 1])).scale(one / kap[i])
        c.append(nxt)
    closure = c[n - 1].d(zero) + c[n - 2].scale(kap[n - 3])
    return c, closure


def rectifying_coeffs_null(fd: FrenetData, g, s0=None, c1=0.0):
    """Coefficients ``(w0, w1, .., w_{n-2})`` of a null g-rectifying field.

    ``w1`` is the constant ``c1``; ``w0 = k1 c1`` and the remaining
    coefficients follow from the Frenet rows.
    """
    if FrameKind(fd.kind) is not FrameKind.NULL:
        raise SpecError("kind: null frames required")
    g = as_scalar_fn(g)
    s = np.asarray(fd.s_grid)
    s0 = float(s[0]) if s0 is None else float(s0)
    grid_index(s, s0)
    check_g(g, s)
    check_curvatures(fd)
    terms, closure = null_rectifying_terms(fd, g)
    full = np.stack([t.value(float(c1)) for t in terms], axis=1)
    w = np.concatenate([full[:, :1], full[:, 2:]], axis=1)
    G = primitive_G(g, s0, s)
    return RectifyingProfile(s, w, "rectifying", G_values=G, frame_coeffs=full,
                             closure_residual=closure.value(float(c1)), c1=float(c1))


# --------------------------------------------------------------------------
# assembling fields from profiles


def assemble(profile, fd: FrenetData):
    """``sum_j c_j E_j`` from a profile's per-frame coefficients."""
    return np.einsum("mk,mkn->mn", profile.frame_coeffs, fd.frames)


def anchored_initial_value(fd: FrenetData, g, basis, s0=None, G0=0.0, c1=0.0):
    """``xi_g(s0)`` that puts the field in the requested subspace at ``s0``."""
    s = np.asarray(fd.s_grid)
    s0 = float(s[0]) if s0 is None else float(s0)
    i0 = grid_index(s, s0)
    if basis == "normal":
        prof = normal_coeffs(fd, g)
    elif FrameKind(fd.kind) is FrameKind.NULL:
        prof = rectifying_coeffs_null(fd, g, s0, c1)
    else:
        prof = rectifying_coeffs_spacelike(fd, g, s0, G0)
    return prof.frame_coeffs[i0] @ fd.frames[i0]


def data_coefficients(xi, fd: FrenetData):
    """Per-frame coefficients of sampled ``xi`` by metric projection."""
    return decompose_in_frame(xi, fd.frames, fd.kind, fd.sigs)


def anchored_integral(values, s, base_index, start):
    """``start + int_{s[base]}^s values``."""
    return start + cumulative_integral(values, s, base_index)
