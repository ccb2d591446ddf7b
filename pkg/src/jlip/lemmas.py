"""Scalar functions behind the distortion bounds, with grid-based checks of
their monotonicity."""
from __future__ import annotations

import numpy as np

from .errors import ParameterError

GRID_SLACK = 1e-13


def _check_k_theta(k, theta):
    if not k > 1:
        raise ParameterError("k must exceed 1")
    theta = np.asarray(theta, dtype=float)
    if np.any((theta <= 0) | (theta >= np.pi / (2 * k))):
        raise ParameterError("theta must lie in (0, pi/(2k))")
    return theta


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any((r <= 0) | (r >= 1)):
        raise ParameterError("r must lie in (0, 1)")
    return r


def _ret(v):
    return float(v) if np.ndim(v) == 0 else v


def f1(k, theta):
    """``k sin t/(1 - sin t) - sin kt/(1 - sin kt)``, decreasing in ``t``."""
    t = _check_k_theta(k, theta)
    s, sk = np.sin(t), np.sin(k * t)
    return _ret(k * s / (1 - s) - sk / (1 - sk))


def f2(k, theta, r):
    """``(1 - (1 - sin t) r) / (1 - (1 - sin kt) r^k)``, decreasing in ``r``."""
    t = _check_k_theta(k, theta)
    r = _check_r(r)
    return _ret((1 - (1 - np.sin(t)) * r) / (1 - (1 - np.sin(k * t)) * r**k))


def _log1p_ray(m, s, r):
    # log(1 + (1 - r^m)/(r^m s)); log-domain for small r so r^m never underflows
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        q = r**m
        near = np.log1p((1 - q) / (q * s))
        far = np.log1p(-q * (1 - s)) - m * np.log(r) - np.log(s)
    return np.where(r > 1e-3, near, far)


def _ray_logs(k, t, r):
    # numerator and denominator of f3; both vanish as r -> 1
    return _log1p_ray(k, np.sin(k * t), r), _log1p_ray(1, np.sin(t), r)


def f3(k, theta, r):
    """Power-map distortion along a ray: decreasing in ``r`` from ``k`` to ``k sin t/sin kt``."""
    t = _check_k_theta(k, theta)
    r = _check_r(r)
    g1, g2 = _ray_logs(k, t, r)
    return _ret(g1 / g2)


def _check_cd(c, d=0.5, theta=0.5):
    for v, nm in ((c, "c"), (d, "d")):
        if np.any((np.asarray(v) <= 0) | (np.asarray(v) >= 1)):
            raise ParameterError(f"{nm} must lie in (0, 1)")
    if np.any((np.asarray(theta) <= 0) | (np.asarray(theta) > 1)):
        raise ParameterError("theta must lie in (0, 1]")


def log_ratio_f(c, d, theta):
    """``log(1 + 2cdt/(1-cd)) / log(1 + 2dt/(1-d))``, increasing in ``t``."""
    _check_cd(c, d, theta)
    c, d, t = (np.asarray(v, dtype=float) for v in (c, d, theta))
    return _ret(np.log1p(2 * c * d * t / (1 - c * d)) / np.log1p(2 * d * t / (1 - d)))


def arth_ratio(c, theta):
    """``artanh(c t) / artanh(t)``, decreasing in ``t`` with limit ``c`` at 0."""
    _check_cd(c, 0.5, theta)
    c, t = np.asarray(c, dtype=float), np.asarray(theta, dtype=float)
    if np.any(t >= 1):
        raise ParameterError("artanh(t) is infinite at t = 1; use t in (0, 1)")
    return _ret(np.arctanh(c * t) / np.arctanh(t))


def product_inequality_sides(c, d, theta):
    """``(1 + 2cdt/(1-cd))(1 + c(1-d)/(1+cd))`` and ``1 + (c(1-d) + 2cdt)/(1-cd)``."""
    _check_cd(c, d, theta)
    c, d, t = (np.asarray(v, dtype=float) for v in (c, d, theta))
    lhs = (1 + 2 * c * d * t / (1 - c * d)) * (1 + c * (1 - d) / (1 + c * d))
    rhs = 1 + (c * (1 - d) + 2 * c * d * t) / (1 - c * d)
    return lhs, rhs


def product_inequality(c, d, theta, slack=1e-12):
    lhs, rhs = product_inequality_sides(c, d, theta)
    return bool(np.all(lhs <= rhs + slack))


def _derivative(f, x, h):
    # five-point central difference
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def is_monotone(values, direction: str, slack: float = GRID_SLACK) -> bool:
    """Strict monotonicity between consecutive grid values, up to ``slack``."""
    dv = np.diff(np.asarray(values, dtype=float))
    if direction == "increasing":
        return bool(np.all(dv > -slack))
    if direction == "decreasing":
        return bool(np.all(dv < slack))
    raise ParameterError("direction must be 'increasing' or 'decreasing'")


def monotone_lhopital(f_num, f_den, interval, direction, anchor="left", n=1000,
                      derivative_slack=1e-9):
    """Check the monotone form of l'Hopital's rule on a grid.

    The derivative ratio ``f'/g'`` is sampled on an interior grid of
    ``interval`` and checked for monotonicity in ``direction``; then the
    quotient ``(f(x) - f(a))/(g(x) - g(a))``, anchored at the chosen
    endpoint, is checked the same way.  Returns the conjunction.
    """
    a, b = map(float, interval)
    if not a < b:
        raise ParameterError("interval must satisfy a < b")
    x = np.linspace(a, b, n + 2)[1:-1]
    h = 1e-3 * (x[1] - x[0])
    dg = _derivative(f_den, x, h)
    if np.any(dg == 0) or np.any(np.sign(dg) != np.sign(dg[0])):
        raise ParameterError("denominator derivative vanishes inside the interval")
    ratio = _derivative(f_num, x, h) / dg
    scale = max(1.0, float(np.max(np.abs(ratio))))
    ok_ratio = is_monotone(ratio, direction, derivative_slack * scale)
    e = a if anchor == "left" else b
    quot = (f_num(x) - f_num(np.float64(e))) / (f_den(x) - f_den(np.float64(e)))
    return ok_ratio and is_monotone(quot, direction)


def ray_pair(k, theta):
    """The numerator and denominator of ``f3`` as functions of ``r``."""
    def g1(r):
        return _ray_logs(k, theta, np.asarray(r, dtype=float))[0]

    def g2(r):
        return _ray_logs(k, theta, np.asarray(r, dtype=float))[1]

    return g1, g2


def log_ratio_pair(c, d):
    """Numerator and denominator of :func:`log_ratio_f` as functions of ``t``."""
    def g1(t):
        return np.log1p(2 * c * d * np.asarray(t, dtype=float) / (1 - c * d))

    def g2(t):
        return np.log1p(2 * d * np.asarray(t, dtype=float) / (1 - d))

    return g1, g2


def arth_pair(c):
    def g1(t):
        return np.arctanh(c * np.asarray(t, dtype=float))

    def g2(t):
        return np.arctanh(np.asarray(t, dtype=float))

    return g1, g2
