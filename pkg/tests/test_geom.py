import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jlip.errors import ParameterError, PoleError
from jlip.geom import (
    INF,
    HyperplaneReflection,
    OrthogonalMap,
    SphereInversion,
    apply_generator,
    as_vector,
    conjugate_point,
    inversion_distance,
    is_infinity,
    lipschitz_ratio,
    norm,
)

coord = st.floats(-10, 10, allow_nan=False)
vec3 = st.lists(coord, min_size=3, max_size=3).map(np.array)
small3 = st.lists(st.floats(-3, 3), min_size=3, max_size=3).map(np.array)


def test_as_vector_splits_complex():
    assert np.array_equal(as_vector(1 + 2j), [1.0, 2.0])
    assert as_vector(np.array([1j, 2])).shape == (2, 2)


@pytest.mark.parametrize("bad", [1.0, [1.0], [np.nan, 0.0], [np.inf, 1.0]])
def test_as_vector_rejects(bad):
    with pytest.raises(ParameterError):
        as_vector(bad)


def test_conjugate_point():
    assert np.allclose(conjugate_point([0.5, 0.0]), [2.0, 0.0])
    assert conjugate_point([0.0, 0.0]) is INF
    assert is_infinity(INF)


@given(vec3)
def test_conjugate_point_involution(v):
    if norm(v) < 1e-3:
        return
    w = conjugate_point(conjugate_point(v))
    assert norm(w - v) <= 1e-12 * norm(v)


def test_reflection_and_inversion_examples():
    r = HyperplaneReflection(np.array([0.0, 1.0]), 0.0)
    assert np.allclose(r.map_points(np.array([1.0, 2.0])), [1.0, -2.0])
    g = SphereInversion(np.zeros(2), 2.0)
    assert np.allclose(g.map_points(np.array([1.0, 0.0])), [4.0, 0.0])
    assert apply_generator(g, np.zeros(2)) is INF
    assert np.array_equal(apply_generator(g, INF), np.zeros(2))
    assert apply_generator(r, INF) is INF


@settings(max_examples=200)
@given(small3, small3, st.floats(0.5, 5))
def test_generators_are_involutions(x, c, rad):
    gens = [HyperplaneReflection(np.array([1.0, -2.0, 0.5]), 0.3)]
    if norm(x - c) > 1e-2:
        gens.append(SphereInversion(c, rad))
    for g in gens:
        back = g.map_points(g.map_points(x))
        assert norm(back - x) <= 1e-12 * max(1.0, norm(x))


def test_orthogonal_map():
    rng = np.random.default_rng(3)
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    A = OrthogonalMap(Q)
    x = rng.normal(size=(100, 4))
    assert np.allclose(norm(A.map_points(x)), norm(x), rtol=0, atol=1e-12)
    assert np.allclose(A.inverse().map_points(A.map_points(x)), x, atol=1e-12)
    with pytest.raises(ParameterError):
        OrthogonalMap(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_inversion_distance_matches_images():
    rng = np.random.default_rng(0)
    g = SphereInversion(np.array([0.2, -0.1, 0.4]), 0.7)
    x, y = rng.normal(size=(2, 10_000, 3))
    d = norm(g.map_points(x) - g.map_points(y))
    assert np.max(np.abs(inversion_distance(g, x, y) - d) / d) < 1e-10
    with pytest.raises(PoleError):
        inversion_distance(g, g.center, y[0])


def test_invalid_generators():
    with pytest.raises(ParameterError):
        SphereInversion(np.zeros(2), 0.0)
    with pytest.raises(ParameterError):
        HyperplaneReflection(np.zeros(3))
    with pytest.raises(ParameterError):
        lipschitz_ratio(0.0, 1.0)
    assert lipschitz_ratio(2.0, 3.0) == 1.5
