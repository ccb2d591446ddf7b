import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jlip import moebius as mb
from jlip.domains import HalfSpace, UnitBall
from jlip.errors import DomainViolation, ParameterError, PoleError
from jlip.geom import INF, norm
from jlip.sampling import sample_points


def _word_only(m):
    # the same map evaluated generator by generator
    return mb.MoebiusMap(m.word, m.dim, None, m.source, m.target)


def test_sigma_a_swaps_a_and_origin():
    a = np.array([0.3, -0.2, 0.4])
    s = mb.sigma_a(a)
    assert norm(s.points(a)) < 1e-15
    assert np.allclose(s.points(np.zeros(3)), a, atol=1e-15)
    x = sample_points(UnitBall(3), 1000, seed=1)
    assert np.allclose(s.points(s.points(x)), x, atol=1e-12)


def test_sigma_a_rejects():
    with pytest.raises(ParameterError):
        mb.sigma_a([0.0, 0.0])
    with pytest.raises(ParameterError):
        mb.sigma_a([1.0, 0.0])


@pytest.mark.parametrize("m", [mb.cayley_h_to_b(), mb.cayley_b_to_h(), mb.disk_automorphism(0.3 - 0.4j),
                               mb.halfplane_to_disk(0.5 + 2j, 0.3)])
def test_coefficients_and_word_agree(m):
    G = HalfSpace(2) if m.source == "half" else UnitBall(2)
    x = sample_points(G, 2000, seed=3)
    w = m.points(x)
    v = _word_only(m).points(x)
    assert np.max(norm(w - v) / np.maximum(1, norm(w))) < 1e-12


def test_cayley_maps_domains():
    h2b, b2h = mb.cayley_h_to_b(), mb.cayley_b_to_h()
    x = sample_points(HalfSpace(2), 2000, seed=0)
    assert np.all(norm(h2b.points(x)) < 1)
    assert np.allclose(b2h.points(h2b.points(x)), x, rtol=1e-9, atol=1e-12)
    assert np.allclose(h2b.points([0.0, 1.0]), [0.0, 0.0])
    assert h2b.apply(INF) is not INF
    assert b2h.apply(np.array([1.0, 0.0])) is INF
    with pytest.raises(PoleError):
        b2h.points([1.0, 0.0])


def test_image_distance_matches_difference():
    rng = np.random.default_rng(0)
    for m in (mb.sigma_a([0.5, 0.1]), mb.halfspace_inversion([0.5, 0, 0], 2.0),
              mb.ball_automorphism([0.2, 0.3, 0.1], np.linalg.qr(rng.normal(size=(3, 3)))[0])):
        G = UnitBall(m.dim) if m.source == "ball" else HalfSpace(m.dim)
        z = sample_points(G, 4000, seed=2)
        x, y = z[:2000], z[2000:]
        d = norm(m.points(x) - m.points(y))
        assert np.max(np.abs(m.image_distance(x, y) - d) / d) < 1e-10


def test_target_boundary_distance_is_stable():
    # an image within 1e-12 of the circle: 1 - |w| is known from the density identity
    m = mb.cayley_h_to_b()
    x = np.array([[0.0, 1e-12]])
    d = m.target_boundary_distance(x)
    # |f(i t)| = (1 - t)/(1 + t), so 1 - |f| = 2t/(1 + t)
    assert d[0] == pytest.approx(2e-12 / (1 + 1e-12), rel=1e-12)


def test_inverse_and_compose():
    m = mb.halfplane_to_disk(1 + 1j, 0.7)
    x = sample_points(HalfSpace(2), 500, seed=4)
    assert np.allclose(m.inverse().points(m.points(x)), x, rtol=1e-9, atol=1e-10)
    c = m.inverse().compose(m)
    assert np.allclose(c.points(x), x, rtol=1e-9, atol=1e-10)
    assert np.allclose(_word_only(c).points(x), x, rtol=1e-9, atol=1e-10)


def test_halfspace_inversion_preserves_half_space():
    m = mb.halfspace_inversion([0.5, -0.2, 0.0], 1.5)
    x = sample_points(HalfSpace(3), 2000, seed=5)
    assert np.all(m.points(x)[:, -1] > 0)
    with pytest.raises(ParameterError):
        mb.halfspace_inversion([0.0, 0.0, 1.0], 1.0)


def test_identity():
    m = mb.identity(3, "ball")
    x = sample_points(UnitBall(3), 10, seed=0)
    assert m.is_identity and np.array_equal(m.points(x), x)


def test_check_maps_into():
    x = sample_points(UnitBall(2), 100, seed=0)
    mb.check_maps_into(mb.sigma_a([0.4, 0.0]), UnitBall(2), UnitBall(2), x)
    with pytest.raises(DomainViolation):
        mb.check_maps_into(mb.cayley_b_to_h(), UnitBall(2), UnitBall(2), x)


def test_ball_identity_and_bounds():
    z = sample_points(UnitBall(3), 200_000, seed=6)
    a, b = z[:100_000], z[100_000:]
    keep = norm(a) > 1e-3
    a, b = a[keep], b[keep]
    lhs, rhs, scale = mb.ball_identity_sides(a, b)
    assert np.max(np.abs(lhs - rhs) / scale) <= 1e-12
    lo, q, hi = mb.chordal_quotient_bounds(a, b)
    assert np.all(lo <= q * (1 + 1e-12)) and np.all(q <= hi * (1 + 1e-12))


@settings(max_examples=100)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * np.pi), st.floats(0, 0.99), st.floats(0, 2 * np.pi))
def test_sigma_boundary_gap(ra, ta, rx, tx):
    a = ra * np.array([np.cos(ta), np.sin(ta)])
    x = rx * np.array([np.cos(tx), np.sin(tx)])
    direct, via = mb.sigma_boundary_gap(a, x)
    assert direct == pytest.approx(via, abs=1e-12)
