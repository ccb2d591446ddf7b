import numpy as np

from jlip.domains import HalfSpace, PuncturedUnitBall, Sector, UnitBall
from jlip.geom import norm
from jlip.sampling import log_ladder, pair_dims, pairs_from_uniforms, sample_points, sobol_block


def test_ball_sampling_is_uniform_in_volume():
    x = sample_points(UnitBall(3), 20_000, seed=0)
    # P(|x| < 1/2) = 1/8 for uniform volume
    assert abs(np.mean(norm(x) < 0.5) - 0.125) < 0.01
    assert np.all(norm(x) < 1)


def test_sampling_is_deterministic():
    a = sample_points(HalfSpace(3), 100, seed=4)
    b = sample_points(HalfSpace(3), 100, seed=4)
    c = sample_points(HalfSpace(3), 100, seed=5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_sobol_blocks_concatenate():
    whole = sobol_block(5, 3, 0, 300)
    parts = np.concatenate([sobol_block(5, 3, 0, 100), sobol_block(5, 3, 100, 200)])
    assert np.array_equal(whole, parts)


def test_pairs_stay_inside_and_avoid_punctures():
    P = PuncturedUnitBall(2, ((0.2, 0.1),))
    x, y, ok = pairs_from_uniforms(P, sobol_block(pair_dims(P), 1, 0, 5000))
    assert np.all(P.contains(x[ok])) and np.all(P.contains(y[ok]))
    assert np.all(norm(x[ok] - [0.2, 0.1]) > 1e-6)
    S = Sector(0.5)
    x, y, ok = pairs_from_uniforms(S, sobol_block(pair_dims(S), 1, 0, 5000))
    assert ok.mean() > 0.99 and np.all(S.contains(y[ok]))


def test_log_ladder():
    t = log_ladder(1e-8, 1e8)
    assert t.size == 641 and t[0] == 1e-8 and t[-1] == 1e8
    assert np.all(np.diff(np.log10(t)) > 0)
    assert log_ladder(1e-3, 1.0).max() <= 1.0
