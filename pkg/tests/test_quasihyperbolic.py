import math

import numpy as np
import pytest

from jlip.domains import HalfSpace, PuncturedUnitBall, Sector, UnitBall, j_metric, rho
from jlip.errors import DomainViolation, ParameterError
from jlip.quasihyperbolic import nominal_tolerance, quasihyperbolic_batch, quasihyperbolic_estimate
from jlip.sampling import pair_dims, pairs_from_uniforms, sobol_block


def test_radial_segment_in_disk():
    # k(0, t) = log(1/(1 - t)) along the radius
    est = quasihyperbolic_estimate(UnitBall(2), [0, 0], [0.5, 0])
    assert est.value == pytest.approx(math.log(2), abs=1e-3)
    est = quasihyperbolic_estimate(UnitBall(3), [0, 0, 0], [0, 0.9, 0])
    assert est.value == pytest.approx(math.log(10), abs=1e-3)
    assert est.tol == nominal_tolerance(64)


def test_diameter_in_disk():
    est = quasihyperbolic_estimate(UnitBall(2), [-0.5, 0], [0.5, 0])
    assert est.value == pytest.approx(2 * math.log(2), abs=1e-3)


@pytest.mark.parametrize("x,y", [([0, 1], [3, 2]), ([0, 0.01], [5, 0.02]), ([-1, 2], [1, 2])])
def test_half_plane_matches_hyperbolic(x, y):
    est = quasihyperbolic_estimate(HalfSpace(2), x, y)
    assert est.value == pytest.approx(rho(HalfSpace(2), x, y), abs=1e-3)
    assert est.upper >= est.value - 1e-12


def test_half_space_batch_accuracy():
    G = HalfSpace(3)
    x, y, ok = pairs_from_uniforms(G, sobol_block(pair_dims(G), 4, 0, 2000))
    k, upper, _ = quasihyperbolic_batch(G, x[ok], y[ok])
    assert np.max(np.abs(k - rho(G, x[ok], y[ok]))) <= 1e-3


def test_error_shrinks_with_resolution():
    G = HalfSpace(2)
    x, y, ok = pairs_from_uniforms(G, sobol_block(pair_dims(G), 9, 0, 200))
    x, y = x[ok], y[ok]
    r = rho(G, x, y)
    errs = [np.max(np.abs(quasihyperbolic_batch(G, x, y, res)[1] - r)) for res in (16, 32, 64)]
    assert errs[1] < errs[0] and errs[2] < errs[1]


def test_disk_bounds():
    G = UnitBall(2)
    x, y, ok = pairs_from_uniforms(G, sobol_block(pair_dims(G), 2, 0, 1000))
    x, y = x[ok], y[ok]
    k, _, _ = quasihyperbolic_batch(G, x, y)
    assert np.all(j_metric(G, x, y) <= k + 1e-3)
    assert np.all(k <= rho(G, x, y) + 1e-3)


def test_around_a_puncture():
    # on |z| = 1/2 the boundary distance is 1/2, so the half circle has length pi
    P = PuncturedUnitBall(2, ((0.0, 0.0),))
    est = quasihyperbolic_estimate(P, [0.5, 0], [-0.5, 0], keep_path=True)
    assert est.value == pytest.approx(math.pi, abs=1e-2)
    assert np.all(np.linalg.norm(est.path, axis=-1) > 0.3)


def test_sector_symmetric_pair():
    # in the quadrant, k((1, t), (t, 1)) is at most the straight-line integral
    S = Sector(math.pi / 2)
    est = quasihyperbolic_estimate(S, [1.0, 0.5], [0.5, 1.0])
    assert j_metric(S, [1.0, 0.5], [0.5, 1.0]) <= est.value + 1e-3
    assert est.value <= est.upper + 1e-12


def test_errors():
    with pytest.raises(DomainViolation):
        quasihyperbolic_estimate(UnitBall(2), [0, 0], [1, 0])
    with pytest.raises(ParameterError):
        quasihyperbolic_estimate(UnitBall(2), [0, 0], [0.5, 0], resolution=2)
    assert quasihyperbolic_estimate(UnitBall(2), [0.1, 0], [0.1, 0]).value == 0.0
