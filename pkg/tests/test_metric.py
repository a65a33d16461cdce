import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lcurve.errors import DimensionMismatch, LinearDependence, NullResidual, ValidationError
from lcurve.metric import (CausalCharacter as CC, TimeOrientation as TO, alternative_time_orientations,
                           boost, causal_character, gram_schmidt_pseudo, lorentz_inner, lorentz_norm,
                           random_lorentz_transform, time_orientation)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def vectors(n):
    return arrays(np.float64, n, elements=finite)


@pytest.mark.parametrize("x, y, expected", [
    ((1, 0, 0), (1, 0, 0), -1.0),
    ((0, 1, 0), (0, 0, 1), 0.0),
    ((3, 3, 0), (3, 3, 0), 0.0),
])
def test_inner_examples(x, y, expected):
    assert lorentz_inner(x, y) == expected


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lorentz_inner([1, 2, 3], [1, 2])


@pytest.mark.parametrize("v, expected", [((0, 1, 0), CC.SPACELIKE), ((1, 0, 0), CC.TIMELIKE),
                                         ((2, 2, 0), CC.NULL)])
def test_causal_examples(v, expected):
    assert causal_character(v) is expected


@pytest.mark.parametrize("v, expected", [((0, 3, 4), 5.0), ((2, 2, 0), 0.0), ((2, 1, 0), np.sqrt(3))])
def test_norm_examples(v, expected):
    assert lorentz_norm(v) == pytest.approx(expected, abs=1e-15)


def test_rejects_nonfinite_and_short():
    with pytest.raises(ValidationError):
        causal_character([np.nan, 1, 0])
    with pytest.raises(ValidationError):
        causal_character([1.0])


def test_gram_schmidt_examples():
    b, sig = gram_schmidt_pseudo([(2, 0, 0), (0, 3, 0)])
    np.testing.assert_allclose(b, [(1, 0, 0), (0, 1, 0)])
    assert sig == (-1, 1)
    b, sig = gram_schmidt_pseudo([(0, 1, 0), (1, 0, 0)])
    np.testing.assert_allclose(b, [(0, 1, 0), (1, 0, 0)])
    assert sig == (1, -1)
    b, sig = gram_schmidt_pseudo([(1, 2, 0), (0, 0, 1)])
    np.testing.assert_allclose(b, [np.array((1, 2, 0)) / np.sqrt(3), (0, 0, 1)])
    assert sig == (1, 1)
    # oracle: the defining pairings, evaluated directly
    G = np.array([[lorentz_inner(x, y) for y in b] for x in b])
    np.testing.assert_allclose(G, np.diag(sig), atol=1e-15)


def test_gram_schmidt_failures():
    with pytest.raises(LinearDependence):
        gram_schmidt_pseudo([(0, 1, 0), (0, 2, 0)])
    with pytest.raises(NullResidual):
        gram_schmidt_pseudo([(1, 1, 0), (0, 0, 1)])


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 8), st.integers(0, 2 ** 32 - 1))
def test_gram_schmidt_random(n, seed):
    rng = np.random.default_rng(seed)
    vs = rng.standard_normal((n, n))
    try:
        b, sig = gram_schmidt_pseudo(vs)
    except (NullResidual, LinearDependence):
        return
    G = lorentz_inner(b[:, None, :], b[None, :, :])
    assert np.max(np.abs(G - np.diag(sig))) < 1e-9
    assert sig.count(-1) == 1


@settings(max_examples=300)
@given(st.integers(3, 8).flatmap(lambda n: st.tuples(vectors(n), vectors(n))))
def test_symmetry(xy):
    x, y = xy
    assert lorentz_inner(x, y) == lorentz_inner(y, x)


@settings(max_examples=300)
@given(st.integers(3, 8).flatmap(lambda n: st.tuples(vectors(n), vectors(n), vectors(n))), finite, finite)
def test_bilinearity(xyz, a, b):
    x, y, z = xyz
    lhs = lorentz_inner(a * x + b * z, y)
    rhs = a * lorentz_inner(x, y) + b * lorentz_inner(z, y)
    bound = (abs(a) * np.abs(x) + abs(b) * np.abs(z)) @ np.abs(y)
    assert abs(lhs - rhs) <= 1e-12 * max(bound, 1e-300) + 1e-300


@settings(max_examples=300)
@given(st.integers(3, 8).flatmap(vectors), st.floats(1e-6, 1e6).flatmap(lambda m: st.sampled_from([m, -m])))
def test_causal_scale_invariance(v, lam):
    assert causal_character(lam * v) is causal_character(v)


@pytest.mark.parametrize("scale", [1e-300, 1e-156, 1e150, 1e300])
def test_causal_character_extreme_magnitudes(scale):
    # the squares of these components underflow or overflow without rescaling
    for v, want in ((np.array([1.0, 1.0, 1.0]), CC.SPACELIKE),
                    (np.array([2.0, 1.0, 1.0]), CC.TIMELIKE),
                    (np.array([1.0, 1.0, 0.0]), CC.NULL)):
        assert causal_character(scale * v) is want
        assert causal_character(scale * 1e-6 * v) is want


@settings(max_examples=200)
@given(st.integers(3, 8).flatmap(vectors))
def test_time_orientation_flips(v):
    t, tn = time_orientation(v), time_orientation(-v)
    if t is TO.UNDEFINED:
        assert tn is TO.UNDEFINED
    else:
        assert {t, tn} == {TO.FUTURE, TO.PAST}


def test_time_orientation_examples():
    assert time_orientation((1, 0, 0)) is TO.FUTURE
    assert time_orientation((-1, 0, 0)) is TO.PAST
    assert time_orientation((0, 1, 0)) is TO.UNDEFINED
    alt = alternative_time_orientations((1, 0, 1))
    assert alt == {"g(W,E)<0": TO.PAST, "w_n>0": TO.FUTURE}


def test_lorentz_transforms_preserve_metric():
    rng = np.random.default_rng(3)
    for n in range(3, 9):
        L = random_lorentz_transform(n, rng)
        J = np.diag([-1.0] + [1.0] * (n - 1))
        np.testing.assert_allclose(L.T @ J @ L, J, atol=1e-12)
    B = boost(4, 0.7)
    assert lorentz_inner(B[:, 0], B[:, 0]) == pytest.approx(-1.0)
