"""Planar holomorphic maps: powers on sectors, polynomials, power series and
the exponential map ``exp((z+1)/(z-1))``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domains import HalfSpace, PuncturedUnitBall, Sector, UnitBall
from .errors import DomainViolation, ParameterError, PoleError
from .geom import POLE_EPS

L1_SLACK = 1e-12
TAIL_EPS = 1e-14


def _cplx(z):
    z = np.asarray(z)
    if z.ndim >= 1 and z.shape[-1] == 2 and not np.iscomplexobj(z):
        z = z[..., 0] + 1j * z[..., 1]
    return z.astype(complex)


def _out(w):
    return complex(w) if np.ndim(w) == 0 else w


def difference_quotients(x, y, K):
    """``(x^k - y^k)/(x - y)`` for ``k = 0..K`` without cancellation."""
    h = [np.zeros_like(x), np.ones_like(x)]
    yp = np.ones_like(y)
    for _ in range(2, K + 1):
        yp = yp * y
        h.append(x * h[-1] + yp)
    return h[: K + 1]


def _series_difference(coeffs, x, y):
    # f(x) - f(y) = (x - y) sum_k a_k (x^k - y^k)/(x - y)
    h = difference_quotients(x, y, len(coeffs) - 1)
    acc = np.zeros_like(x)
    for c, hk in zip(coeffs, h):
        acc = acc + c * hk
    return (x - y) * acc


def horner(coeffs, z):
    """Evaluate ``sum coeffs[k] z^k`` (ascending coefficients)."""
    acc = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class PowerMap:
    """``z -> z^k`` from the sector of opening ``pi/k`` onto the upper half-plane."""

    k: int
    name = "power"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError("power map exponent must be a positive integer")

    def source_domain(self):
        return Sector(np.pi / self.k)

    def target_domain(self):
        return HalfSpace(2)

    def _polar(self, z):
        z = _cplx(z)
        r = np.abs(z)
        t = np.mod(np.angle(z), 2 * np.pi)
        if np.any((t <= 0) | (t >= np.pi / self.k) | (r == 0)):
            raise DomainViolation(f"power map needs points in the sector of opening pi/{self.k}")
        return r, t

    def __call__(self, z):
        r, t = self._polar(z)
        # polar form keeps the argument exact, so Im z^k > 0 is preserved
        return _out(r**self.k * np.exp(1j * self.k * t))

    def target_boundary_distance(self, z):
        r, t = self._polar(z)
        return r**self.k * np.sin(self.k * t)

    def image_difference(self, x, y):
        x, y = _cplx(x), _cplx(y)
        self._polar(x), self._polar(y)
        return (x - y) * difference_quotients(x, y, self.k)[self.k]


@dataclass(frozen=True)
class Polynomial:
    """``sum_{k=1}^p a_k z^k`` with ``sum |a_k| <= 1``, on the punctured disk."""

    coeffs: tuple  # a_1, ..., a_p
    name = "poly"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if c.size == 0 or not np.any(c):
            raise ParameterError("polynomial needs a nonzero coefficient")
        if np.sum(np.abs(c)) > 1 + L1_SLACK:
            raise ParameterError("coefficients must satisfy sum |a_k| <= 1")
        object.__setattr__(self, "coeffs", tuple(complex(v) for v in c))

    @property
    def degree(self):
        c = np.asarray(self.coeffs)
        return int(np.flatnonzero(c)[-1]) + 1

    @property
    def zero_order(self):
        return int(np.flatnonzero(np.asarray(self.coeffs))[0]) + 1

    def source_domain(self):
        return PuncturedUnitBall(2, ((0.0, 0.0),))

    target_domain = source_domain

    def __call__(self, z):
        z = _cplx(z)
        if np.any(np.abs(z) >= 1):
            raise DomainViolation("polynomial maps are evaluated in the unit disk")
        return _out(horner((0j,) + self.coeffs, z))

    def image_difference(self, x, y):
        x, y = _cplx(x), _cplx(y)
        if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
            raise DomainViolation("polynomial maps are evaluated in the unit disk")
        return _series_difference((0j,) + self.coeffs, x, y)


@dataclass(frozen=True)
class PowerSeries:
    """``sum_{k>=0} a_k z^k`` with ``sum |a_k| <= 1``, truncated where the tail is below 1e-14."""

    coeffs: tuple  # a_0, a_1, ...
    name = "series"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if np.sum(np.abs(c)) > 1 + L1_SLACK:
            raise ParameterError("coefficients must satisfy sum |a_k| <= 1")
        if not np.any(c[1:]):
            raise ParameterError("power series must be non-constant")
        tail = np.cumsum(np.abs(c)[::-1])[::-1]  # tail[k] = sum_{j >= k} |a_j|
        keep = np.flatnonzero(tail >= TAIL_EPS)
        n = int(keep[-1]) + 1 if keep.size else 1
        object.__setattr__(self, "coeffs", tuple(complex(v) for v in c[:n]))

    @property
    def truncation(self):
        return len(self.coeffs) - 1

    def source_domain(self):
        return UnitBall(2)

    target_domain = source_domain

    def __call__(self, z):
        z = _cplx(z)
        if np.any(np.abs(z) >= 1):
            raise DomainViolation("power series are evaluated in the unit disk")
        return _out(horner(self.coeffs, z))

    def image_difference(self, x, y):
        x, y = _cplx(x), _cplx(y)
        if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
            raise DomainViolation("power series are evaluated in the unit disk")
        return _series_difference(self.coeffs, x, y)


@dataclass(frozen=True)
class ExpExample:
    """``z -> exp((z+1)/(z-1))``; maps the disk onto the punctured disk."""

    name = "expexample"

    def source_domain(self):
        return UnitBall(2)

    def target_domain(self):
        # the ratio is measured in the disk, not in the punctured image
        return UnitBall(2)

    def exponent(self, z):
        z = _cplx(z)
        if np.any(np.abs(z - 1) <= POLE_EPS):
            raise PoleError("exponential example is singular at z = 1")
        if np.any(np.abs(z) >= 1):
            raise DomainViolation("exponential example is evaluated in the unit disk")
        return (z + 1) / (z - 1)

    def __call__(self, z):
        return _out(np.exp(self.exponent(z)))

    def image_difference(self, x, y):
        # e^A - e^B = e^B expm1(A - B) with A - B = -2 (x - y)/((x - 1)(y - 1))
        ex, ey = self.exponent(x), self.exponent(y)
        x, y = _cplx(x), _cplx(y)
        return np.exp(ey) * np.expm1(-2 * (x - y) / ((x - 1) * (y - 1)))


@dataclass(frozen=True)
class ZeroFreePolynomial:
    """Polynomial ``Q`` of exact degree ``d >= 1`` with no zeros in the open unit disk."""

    coeffs: tuple  # ascending q_0 .. q_d
    roots: tuple = field(default=(), compare=False)

    def __post_init__(self):
        c = np.trim_zeros(np.asarray(self.coeffs, dtype=complex).ravel(), "b")
        if c.size < 2:
            raise ParameterError("zero-free polynomial needs exact degree >= 1")
        r = np.roots(c[::-1])
        # a root with |r| in [1 - 1e-10, 1) is too close to call, so reject it too
        if np.any(np.abs(r) < 1.0):
            raise ParameterError(f"polynomial has a root of modulus {np.abs(r).min():.3g} < 1")
        object.__setattr__(self, "coeffs", tuple(complex(v) for v in c))
        object.__setattr__(self, "roots", tuple(complex(v) for v in r))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        return _out(horner(self.coeffs, _cplx(z)))

    @classmethod
    def from_roots(cls, roots, scale=1.0):
        c = np.poly(np.asarray(roots, dtype=complex))[::-1] * scale
        return cls(tuple(c))


def evaluate(f, z):
    return f(z)


def monomial_times(m: int, Q: ZeroFreePolynomial) -> Polynomial:
    """``z^m Q(z)`` scaled so its coefficients have unit l1 norm."""
    if m < 1:
        raise ParameterError("need a zero of order m >= 1 at the origin")
    c = np.concatenate([np.zeros(m - 1), np.asarray(Q.coeffs)])
    return Polynomial(tuple(c / np.sum(np.abs(c))))


def random_zero_free(rng, degree: int, rmax: float = 4.0) -> ZeroFreePolynomial:
    mod = rng.uniform(1.0, rmax, degree)
    ang = rng.uniform(0, 2 * np.pi, degree)
    return ZeroFreePolynomial.from_roots(mod * np.exp(1j * ang))


def random_l1_series(rng, n_terms: int = 12) -> PowerSeries:
    """Uniform draw from ``{sum |a_k| <= 1}``: solid-simplex moduli, uniform phases."""
    while True:
        w = rng.dirichlet(np.ones(n_terms + 1))[:-1]
        if np.any(w[1:] > 0):
            break
    ph = rng.uniform(0, 2 * np.pi, n_terms)
    return PowerSeries(tuple(w * np.exp(1j * ph)))


def random_monomial_product(rng, p_max: int = 6) -> Polynomial:
    """``z^m Q`` with ``Q`` zero-free in the disk and total degree ``m + d <= p_max``."""
    p = int(rng.integers(2, p_max + 1))
    m = int(rng.integers(1, p))
    return monomial_times(m, random_zero_free(rng, p - m))


# ratio helpers --------------------------------------------------------------

def _j_half_plane(w1, w2):
    return np.log1p(np.abs(w1 - w2) / np.minimum(w1.imag, w2.imag))


def _j_sector(k, z1, z2):
    S = Sector(np.pi / k)
    a = np.stack([z1.real, z1.imag], -1)
    b = np.stack([z2.real, z2.imag], -1)
    m = np.minimum(S._raw_distance(a), S._raw_distance(b))
    return np.log1p(np.abs(z1 - z2) / m)


def power_map_j_ratio(k: int, x, y):
    """``j_H(x^k, y^k) / j_S(x, y)`` on the sector of opening ``pi/k``."""
    f = PowerMap(k)
    x, y = _cplx(x), _cplx(y)
    if np.any(x == y):
        raise ParameterError("ratio is undefined for coincident points")
    wx, wy = f(x), f(y)
    num = np.log1p(np.abs(wx - wy) / np.minimum(f.target_boundary_distance(x),
                                                  f.target_boundary_distance(y)))
    out = num / _j_sector(k, x, y)
    return float(out) if np.ndim(out) == 0 else out


def power_difference_bound(n: int, x, y, theta):
    """Both sides of ``1 + |x^n - y^n|/(|x|^n sin n t) <= (1 + |x - y|/(|x| sin t))^n``."""
    x, y = _cplx(x), _cplx(y)
    theta = np.asarray(theta, dtype=float)
    ax = np.abs(x)
    lhs = 1 + np.abs(x**n - y**n) / (ax**n * np.sin(n * theta))
    rhs = (1 + np.abs(x - y) / (ax * np.sin(theta))) ** n
    return lhs, rhs


def power_log_bound(z, p: int):
    """Both sides of ``log(1 + |z^p - 1|) <= p log(1 + |z - 1|)``."""
    z = _cplx(z)
    return np.log1p(np.abs(z**p - 1)), p * np.log1p(np.abs(z - 1))


@dataclass
class PolynomialBoundParts:
    q_part: float
    m_part: float
    q_bound: float
    combined_bound: float
    f_part: float
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())


def polynomial_ratio_bound_parts(Q: ZeroFreePolynomial, m: int, x, y, slack=1e-12):
    """Split ``|f(x)/f(y) - 1|`` for ``f = z^m Q`` into its zero-free and monomial parts."""
    x, y = complex(_cplx(x)), complex(_cplx(y))
    if x == 0 or y == 0:
        raise ParameterError("points must be nonzero")
    if abs(x) >= 1 or abs(y) >= 1:
        raise DomainViolation("points must lie in the unit disk")
    qx, qy = Q(x), Q(y)
    q_part = abs(qx / qy - 1)
    z = x / y
    m_part = abs(z**m - 1) if m > 0 else 0.0
    grow = 1 + abs(x - y) / (1 - abs(y))
    q_bound = grow**Q.degree - 1
    combined = (1 + m_part) * grow**Q.degree - 1
    f_part = abs(z**m * qx / qy - 1)
    lhs, rhs = power_log_bound(z, max(m, 1))
    checks = {
        "zero_free_ratio": q_part <= q_bound * (1 + slack) + slack,
        "modulus_ratio": abs(qx / qy) <= grow**Q.degree * (1 + slack),
        "combined": f_part <= combined * (1 + slack) + slack,
        "power_log": bool(lhs <= rhs + slack),
    }
    return PolynomialBoundParts(q_part, m_part, q_bound, combined, f_part, checks)


def exp_example_j_pair(k: int):
    """``(j_disk(z_k, z_{k+1}), j_image(f(z_k), f(z_{k+1})))`` for ``z_k = tanh(k/2)``.

    Points are carried by their distance to 1 and images by their logarithm,
    since ``f(z_k) = exp(-e^k)`` underflows long before ``k = 30``.
    """
    if int(k) != k or not 1 <= k <= 30:
        raise ParameterError("k must be an integer in [1, 30]")
    # 1 - tanh(u) = 2 / (e^{2u} + 1)
    c0 = 2.0 / (np.exp(k) + 1.0)
    c1 = 2.0 / (np.exp(k + 1.0) + 1.0)
    j_in = np.log1p((c0 - c1) / c1)
    # log f(z) = (z + 1)/(z - 1) = -(2 - c)/c for z = 1 - c
    l0 = -(2.0 - c0) / c0
    l1 = -(2.0 - c1) / c1
    j_out = log_j_punctured_disk(l0, 0.0, l1, 0.0)
    return float(j_in), float(j_out)


def log_j_punctured_disk(la, pa, lb, pb):
    """``j`` in the punctured disk for images given as ``exp(l + i p)`` with tiny moduli."""
    hi, lo = max(la, lb), min(la, lb)
    if hi >= np.log(0.5):
        raise ParameterError("log-domain evaluation assumes moduli below 1/2")
    # |A - B| = e^hi |1 - e^{(lo - hi) + i(phase difference)}|, min distance = e^lo
    dphi = (pb - pa) if la >= lb else (pa - pb)
    log_diff = hi + np.log(np.abs(-np.expm1(complex(lo - hi, dphi))))
    return float(np.logaddexp(0.0, log_diff - lo))


def exp_example_small_t_ratio(t: float) -> float:
    """``j_B(f(0), f(t)) / j_B(0, t)`` for the exponential example."""
    if not 0 < t < 1:
        raise ParameterError("t must lie in (0, 1)")
    e1 = np.exp(-1.0)
    # f(0) - f(t) = e^{-1} (1 - e^{-2t/(1-t)})
    diff = -e1 * np.expm1(-2 * t / (1 - t))
    j_out = np.log1p(diff / (1 - e1))
    j_in = np.log1p(t / (1 - t))
    return float(j_out / j_in)
