"""Lorentzian linear algebra on R^n with the timelike coordinate first.

Vectors are plain numpy arrays; every function accepts stacks of vectors
along leading axes, so ``lorentz_inner(a, b)`` with ``a.shape == (m, n)``
returns ``m`` inner products.
"""
import math
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, LinearDependence, NullResidual, ValidationError

DEFAULT_CAUSAL_TOL = 1e-9


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"


class TimeOrientation(Enum):
    FUTURE = "future_pointing"
    PAST = "past_pointing"
    UNDEFINED = "undefined"


def as_vector(v, dim=None):
    """Validate and return ``v`` as a float array of shape ``(..., n)``, n >= 2."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] < 2:
        raise ValidationError(f"vector must have at least 2 components, got shape {arr.shape}")
    if dim is not None and arr.shape[-1] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("vector has non-finite coordinates")
    return arr


def metric_diag(n):
    """Diagonal of the Gram matrix of the standard basis: (-1, 1, ..., 1)."""
    d = np.ones(n)
    d[0] = -1.0
    return d


def lorentz_inner(x, y):
    """Return ``-x1*y1 + x2*y2 + ... + xn*yn`` (broadcast over leading axes)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    return np.sum(x[..., 1:] * y[..., 1:], axis=-1) - x[..., 0] * y[..., 0]


def lorentz_norm(v):
    """``sqrt(|<v, v>|)``; the causal sign is reported by :func:`causal_character`."""
    return np.sqrt(np.abs(lorentz_inner(v, v)))


def causal_character(v, tol=DEFAULT_CAUSAL_TOL):
    """Spacelike, timelike or null; null when ``|<v,v>| <= tol * |v|_E^2``.

    The threshold is relative to the Euclidean size, so the answer does not
    change when ``v`` is rescaled. The zero vector counts as null.
    """
    v = as_vector(v)
    m = float(np.max(np.abs(v)))
    if m == 0.0:
        return CausalCharacter.NULL
    # exact power-of-two rescaling keeps the squares clear of underflow and overflow
    v = np.ldexp(v, -math.frexp(m)[1])
    q = float(lorentz_inner(v, v))
    threshold = tol * float(np.dot(v, v))
    if abs(q) <= threshold:
        return CausalCharacter.NULL
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def time_orientation(v, tol=DEFAULT_CAUSAL_TOL):
    """Future pointing iff the timelike (first) coordinate is positive.

    Spacelike vectors, and the zero vector, have no time orientation.
    """
    v = as_vector(v)
    if causal_character(v, tol) is CausalCharacter.SPACELIKE or not np.any(v):
        return TimeOrientation.UNDEFINED
    if v[0] > 0:
        return TimeOrientation.FUTURE
    if v[0] < 0:
        return TimeOrientation.PAST
    return TimeOrientation.UNDEFINED


def alternative_time_orientations(v, tol=DEFAULT_CAUSAL_TOL):
    """The two competing readings based on the last coordinate.

    ``"g(W,E)<0"`` calls ``v`` future pointing when ``<v, e_n> = v_n < 0``;
    ``"w_n>0"`` calls it future pointing when ``v_n > 0``. The two disagree on
    every vector with ``v_n != 0``, so both are reported side by side.
    """
    v = as_vector(v)
    out = {}
    undefined = causal_character(v, tol) is CausalCharacter.SPACELIKE or v[-1] == 0
    for label, future in (("g(W,E)<0", v[-1] < 0), ("w_n>0", v[-1] > 0)):
        if undefined:
            out[label] = TimeOrientation.UNDEFINED
        else:
            out[label] = TimeOrientation.FUTURE if future else TimeOrientation.PAST
    return out


def gram_schmidt_pseudo(vectors, tol=DEFAULT_CAUSAL_TOL):
    """Pseudo-orthonormalize ``vectors`` in order.

    Returns ``(basis, sigs)`` with ``<b_i, b_j> = sigs[i] * delta_ij``. Each
    ``b_i`` is the residual of ``v_i`` against the previous basis vectors,
    divided by its Lorentzian norm.

    Raises
    ------
    LinearDependence
        A residual has Euclidean size below ``tol`` relative to its input.
    NullResidual
        A residual is null within ``tol``; the process cannot continue in an
        indefinite metric.
    """
    vs = as_vector(vectors)
    if vs.ndim != 2:
        raise ValidationError("expected a list of vectors")
    basis, sigs = [], []
    for i, v in enumerate(vs):
        r = v.copy()
        for b, e in zip(basis, sigs):
            r -= e * lorentz_inner(r, b) * b
        size = float(np.linalg.norm(r))
        if size <= tol * max(1.0, float(np.linalg.norm(v))):
            raise LinearDependence(f"vector {i} is linearly dependent on its predecessors", node=i)
        q = float(lorentz_inner(r, r))
        if abs(q) <= tol * size * size:
            raise NullResidual(f"residual of vector {i} is null", node=i)
        basis.append(r / np.sqrt(abs(q)))
        sigs.append(1 if q > 0 else -1)
    return np.array(basis), tuple(sigs)


def boost(n, rapidity, axis=1):
    """Lorentz boost mixing the time axis with spatial ``axis``."""
    L = np.eye(n)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    L[0, 0] = L[axis, axis] = ch
    L[0, axis] = L[axis, 0] = sh
    return L


def random_lorentz_transform(n, rng, max_rapidity=1.0):
    """A random element of the identity component of O(1, n-1).

    Built as spatial rotation * boost * spatial rotation, so it preserves
    :func:`lorentz_inner` exactly up to rounding.
    """

    def rotation():
        R = np.eye(n)
        q, r = np.linalg.qr(rng.standard_normal((n - 1, n - 1)))
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        R[1:, 1:] = q
        return R

    return rotation() @ boost(n, rng.uniform(-max_rapidity, max_rapidity)) @ rotation()
