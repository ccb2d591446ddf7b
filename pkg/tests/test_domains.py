import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jlip.domains import (
    HalfSpace,
    PuncturedUnitBall,
    Sector,
    UnitBall,
    boundary_distance,
    j_metric,
    rho,
    rho_ball,
    rho_half,
    sandwich_check,
)
from jlip.errors import DomainViolation, ParameterError
from jlip.sampling import sample_points

LOG2, LOG3 = math.log(2), math.log(3)


def test_ball_examples():
    B = UnitBall(2)
    assert j_metric(B, [0, 0], [0.5, 0]) == pytest.approx(LOG2, abs=1e-15)
    assert rho_ball([0, 0], [0.5, 0]) == pytest.approx(LOG3, abs=1e-15)
    assert boundary_distance(B, [0.25, 0]) == 0.75


def test_half_space_examples():
    H = HalfSpace(2)
    assert j_metric(H, [0, 1], [0, 2]) == pytest.approx(LOG2, abs=1e-15)
    assert rho_half([0, 1], [0, 2]) == pytest.approx(LOG2, abs=1e-15)


def test_punctured_disk_example():
    P = PuncturedUnitBall(2, ((0.0, 0.0),))
    assert j_metric(P, [0.1, 0], [0.2, 0]) == pytest.approx(LOG2, abs=1e-15)
    assert not P.contains(np.zeros(2))


def test_sector_distance():
    S = Sector(math.pi / 2)
    assert boundary_distance(S, [1.0, 1.0]) == pytest.approx(1.0)
    W = Sector(3 * math.pi / 2)
    # beyond a right angle from both edges the vertex is nearest
    x = np.array([-1.0, 1.0]) / math.sqrt(2)
    assert boundary_distance(W, x) == pytest.approx(1.0)


def test_domain_violations():
    with pytest.raises(DomainViolation):
        j_metric(UnitBall(2), [1.0, 0], [0, 0])
    with pytest.raises(DomainViolation):
        j_metric(HalfSpace(3), [0, 0, -1], [0, 0, 1])
    with pytest.raises(ParameterError):
        rho(Sector(1.0), [1, 0.1], [1, 0.2])
    with pytest.raises(ParameterError):
        PuncturedUnitBall(2, ((2.0, 0.0),))


@pytest.mark.parametrize("G", [UnitBall(2), UnitBall(3), HalfSpace(2), HalfSpace(3)])
def test_sandwich_inequalities(G):
    z = sample_points(G, 20_000, seed=1)
    x, y = z[:10_000], z[10_000:]
    j, r = j_metric(G, x, y), rho(G, x, y)
    assert np.all(0.5 * r <= j + 1e-12)
    assert np.all(j <= r + 1e-12)


@pytest.mark.parametrize("G", [UnitBall(3), HalfSpace(2), Sector(1.0),
                               PuncturedUnitBall(2, ((0.3, 0.1),))])
def test_triangle_inequality(G):
    z = sample_points(G, 30_000, seed=2)
    a, b, c = z[:10_000], z[10_000:20_000], z[20_000:]
    assert np.all(j_metric(G, a, c) <= j_metric(G, a, b) + j_metric(G, b, c) + 1e-12)


@settings(max_examples=100)
@given(st.floats(0.01, 100), st.floats(-5, 5), st.floats(0.01, 5), st.floats(-5, 5), st.floats(0.01, 5))
def test_half_space_scaling_invariance(lam, a, b, c, d):
    H = HalfSpace(2)
    x, y = np.array([a, b]), np.array([c, d])
    assert j_metric(H, lam * x, lam * y) == pytest.approx(j_metric(H, x, y), abs=1e-12)
    assert j_metric(H, x, y) == j_metric(H, y, x)


def test_j_invariant_under_rotation():
    rng = np.random.default_rng(5)
    B = UnitBall(3)
    z = sample_points(B, 2000, seed=5)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    x, y = z[:1000], z[1000:]
    # rotating perturbs 1 - |x| by rounding, so compare relatively
    assert np.allclose(j_metric(B, x @ Q, y @ Q), j_metric(B, x, y), rtol=1e-10, atol=0)


def test_j_huge_ratio_is_finite():
    H = HalfSpace(2)
    # |x - y| / d overflows to inf; the log-domain branch takes over
    v = j_metric(H, [0, 1e-250], [1e100, 1])
    assert np.isfinite(v) and v == pytest.approx(350 * math.log(10), rel=1e-12)


def test_sandwich_check():
    rep = sandwich_check(UnitBall(2), [0.1, 0.2], [-0.5, 0.3])
    assert rep.ok and rep.j <= rep.rho
    rep = sandwich_check(HalfSpace(3), [0, 0, 1], [2, 1, 3])
    assert rep.ok and abs(rep.k - rep.rho) <= rep.tol
