import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jlip import lemmas as lm
from jlip.errors import ParameterError

KS = (1.5, 2.0, 3.0, 5.0)
R = np.linspace(0, 1, 1002)[1:-1]


@pytest.mark.parametrize("k", KS)
def test_f1_decreasing(k):
    t = np.linspace(0, np.pi / (2 * k), 1002)[1:-1]
    assert lm.is_monotone(lm.f1(k, t), "decreasing")


@pytest.mark.parametrize("k", KS)
@pytest.mark.parametrize("frac", [0.5, "edge"])
def test_f2_f3_decreasing_and_bracketed(k, frac):
    t = np.pi / (4 * k) if frac == 0.5 else np.pi / (2 * k) - 1e-3
    assert lm.is_monotone(lm.f2(k, t, R), "decreasing")
    v = lm.f3(k, t, R)
    assert lm.is_monotone(v, "decreasing")
    assert np.all(v < k) and np.all(v > k * math.sin(t) / math.sin(k * t))
    g1, g2 = lm.ray_pair(k, t)
    assert lm.monotone_lhopital(g1, g2, (1e-3, 1 - 1e-6), "decreasing", anchor="right")


def test_f3_limits():
    # f3 -> k sin t / sin kt as r -> 1 and creeps up to k as r -> 0
    k, t = 3.0, math.pi / 12
    assert lm.f3(k, t, 1 - 1e-9) == pytest.approx(k * math.sin(t) / math.sin(k * t), rel=1e-6)
    assert lm.f3(k, t, 1e-10) == pytest.approx(2.847879877494846, rel=1e-12)


def test_f3_tiny_r_stays_finite():
    # r^5 underflows here; mpmath reference values
    t = math.pi / 20
    assert lm.f3(5, t, 1e-80) == pytest.approx(4.952010509750831, rel=1e-14)
    assert lm.f3(5, t, 1e-300) == pytest.approx(4.987108544772923, rel=1e-14)
    v = lm.f3(5, t, np.array([1e-300, 1e-3, 0.5]))
    assert np.all(np.isfinite(v)) and np.all(np.diff(v) < 0)


def test_argument_checks():
    with pytest.raises(ParameterError):
        lm.f1(1.0, 0.1)
    with pytest.raises(ParameterError):
        lm.f1(2.0, math.pi / 4)
    with pytest.raises(ParameterError):
        lm.f2(2.0, 0.1, 1.0)
    with pytest.raises(ParameterError):
        lm.arth_ratio(0.5, 1.0)
    with pytest.raises(ParameterError):
        lm.is_monotone([1, 2], "sideways")


@pytest.mark.parametrize("c", np.round(np.arange(0.1, 1.0, 0.1), 1))
def test_log_and_artanh_ratios(c):
    t = np.linspace(0, 1, 1001)[1:]
    g = lm.arth_ratio(c, t[:-1])
    assert lm.is_monotone(g, "decreasing") and np.all(g <= c + 1e-12)
    assert lm.arth_ratio(c, 1e-8) == pytest.approx(c, rel=1e-12)
    for d in np.round(np.arange(0.1, 1.0, 0.1), 1):
        f = lm.log_ratio_f(c, d, t)
        assert lm.is_monotone(f, "increasing") and np.all(f <= f[-1] + 1e-12)
        g1, g2 = lm.log_ratio_pair(c, d)
        assert lm.monotone_lhopital(g1, g2, (0, 1), "increasing")
    h1, h2 = lm.arth_pair(c)
    assert lm.monotone_lhopital(h1, h2, (0, 0.999), "decreasing")


def test_product_inequality_random():
    rng = np.random.default_rng(0)
    c, d = rng.uniform(1e-6, 1 - 1e-6, (2, 10_000))
    t = rng.uniform(1e-6, 1, 10_000)
    assert lm.product_inequality(c, d, t)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.01, 1.0))
def test_product_inequality_property(c, d, t):
    lhs, rhs = lm.product_inequality_sides(c, d, t)
    assert lhs <= rhs + 1e-12


def test_monotone_lhopital_detects_non_monotone():
    assert not lm.monotone_lhopital(np.sin, lambda x: x, (0.1, 6.0), "decreasing")
    with pytest.raises(ParameterError):
        lm.monotone_lhopital(np.sin, np.cos, (0.1, 4.0), "decreasing")
