"""Canonical domains and the distance-ratio and hyperbolic metrics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainViolation, ParameterError
from .geom import as_vector, norm


def _points(x, dim):
    return as_vector(x, dim)


@dataclass(frozen=True)
class UnitBall:
    n: int = 2
    kind = "ball"

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("dimension must be at least 2")

    @property
    def dim(self):
        return self.n

    def contains(self, x):
        return norm(x) < 1.0

    def _raw_distance(self, x):
        return 1.0 - norm(x)

    def spec(self):
        return f"ball{self.n}"


@dataclass(frozen=True)
class HalfSpace:
    """Upper half-space ``x_n > 0``."""

    n: int = 2
    kind = "half"

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("dimension must be at least 2")

    @property
    def dim(self):
        return self.n

    def contains(self, x):
        return np.asarray(x)[..., -1] > 0.0

    def _raw_distance(self, x):
        return np.asarray(x, dtype=float)[..., -1]

    def spec(self):
        return f"half{self.n}"


@dataclass(frozen=True)
class Sector:
    """Planar angular domain ``{r e^{i t} : 0 < t < phi, r > 0}``."""

    phi: float
    kind = "sector"

    def __post_init__(self):
        if not (0.0 < self.phi < 2 * np.pi):
            raise ParameterError("sector opening must lie in (0, 2*pi)")

    @property
    def n(self):
        return 2

    dim = n

    def angle(self, x):
        x = np.asarray(x, dtype=float)
        return np.mod(np.arctan2(x[..., 1], x[..., 0]), 2 * np.pi)

    def contains(self, x):
        t = self.angle(x)
        return (t > 0.0) & (t < self.phi) & (norm(x) > 0.0)

    def _raw_distance(self, x):
        t = self.angle(x)
        m = np.minimum(t, self.phi - t)
        r = norm(x)
        # past a right angle the nearest boundary point is the vertex
        return np.where(m <= np.pi / 2, r * np.sin(np.minimum(m, np.pi / 2)), r)

    def spec(self):
        return f"sector:phi={self.phi!r}"


def _punctures(pts, n):
    p = np.asarray(pts, dtype=float).reshape(-1, n) if len(pts) else np.zeros((0, n))
    return p


@dataclass(frozen=True)
class PuncturedUnitBall:
    n: int = 2
    punctures: tuple = ()
    kind = "ball"

    def __post_init__(self):
        base = UnitBall(self.n)
        p = _punctures(self.punctures, self.n)
        if p.size and not np.all(base.contains(p)):
            raise ParameterError("punctures must lie strictly inside the ball")
        object.__setattr__(self, "punctures", tuple(tuple(map(float, q)) for q in p))

    @property
    def dim(self):
        return self.n

    @property
    def base(self):
        return UnitBall(self.n)

    @property
    def puncture_array(self):
        return _punctures(self.punctures, self.n)

    def contains(self, x):
        ok = self.base.contains(x)
        for p in self.puncture_array:
            ok = ok & (norm(np.asarray(x) - p) > 0.0)
        return ok

    def _raw_distance(self, x):
        d = self.base._raw_distance(x)
        for p in self.puncture_array:
            d = np.minimum(d, norm(np.asarray(x) - p))
        return d

    def spec(self):
        return self.base.spec() + "".join(
            ":puncture=" + ",".join(repr(c) for c in p) for p in self.punctures
        )


@dataclass(frozen=True)
class PuncturedHalfSpace:
    n: int = 2
    punctures: tuple = ()
    kind = "half"

    def __post_init__(self):
        base = HalfSpace(self.n)
        p = _punctures(self.punctures, self.n)
        if p.size and not np.all(base.contains(p)):
            raise ParameterError("punctures must lie strictly inside the half-space")
        object.__setattr__(self, "punctures", tuple(tuple(map(float, q)) for q in p))

    @property
    def dim(self):
        return self.n

    @property
    def base(self):
        return HalfSpace(self.n)

    @property
    def puncture_array(self):
        return _punctures(self.punctures, self.n)

    contains = PuncturedUnitBall.contains
    _raw_distance = PuncturedUnitBall._raw_distance

    def spec(self):
        return self.base.spec() + "".join(
            ":puncture=" + ",".join(repr(c) for c in p) for p in self.punctures
        )


Domain = UnitBall | HalfSpace | Sector | PuncturedUnitBall | PuncturedHalfSpace


def is_punctured(G) -> bool:
    return isinstance(G, (PuncturedUnitBall, PuncturedHalfSpace)) and len(G.punctures) > 0


def check_inside(G, x) -> np.ndarray:
    x = _points(x, G.dim)
    if not np.all(G.contains(x)):
        raise DomainViolation(f"point(s) outside {G.spec()}")
    return x


def boundary_distance(G, x):
    """Euclidean distance from ``x`` to the boundary of ``G`` (punctures included)."""
    x = check_inside(G, x)
    d = G._raw_distance(x)
    return float(d) if np.ndim(d) == 0 else d


def _log1p_ratio(num, den):
    # log(1 + num/den) without overflow when num/den is huge
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        u = num / den
        direct = np.log1p(u)
        safe = np.log(num) - np.log(den) + np.log1p(den / np.where(num > 0, num, 1.0))
    return np.where(np.isfinite(u) & (u < 1e300), direct, safe)


def j_metric(G, x, y):
    """Distance-ratio metric ``log(1 + |x-y| / min(d(x), d(y)))``."""
    x = check_inside(G, x)
    y = check_inside(G, y)
    m = np.minimum(G._raw_distance(x), G._raw_distance(y))
    out = _log1p_ratio(norm(x - y), m)
    return float(out) if np.ndim(out) == 0 else out


def rho_ball(x, y):
    """Hyperbolic distance in the unit ball, any dimension."""
    x = as_vector(x)
    y = as_vector(y)
    nx, ny = norm(x), norm(y)
    if np.any(nx >= 1) or np.any(ny >= 1):
        raise DomainViolation("points must lie in the open unit ball")
    den = np.sqrt((1 - nx) * (1 + nx) * (1 - ny) * (1 + ny))
    out = 2.0 * np.arcsinh(norm(x - y) / den)
    return float(out) if np.ndim(out) == 0 else out


def rho_half(x, y):
    """Hyperbolic distance in the upper half-space, any dimension."""
    x = as_vector(x)
    y = as_vector(y)
    if np.any(x[..., -1] <= 0) or np.any(y[..., -1] <= 0):
        raise DomainViolation("points must lie in the upper half-space")
    out = 2.0 * np.arcsinh(norm(x - y) / (2.0 * np.sqrt(x[..., -1] * y[..., -1])))
    return float(out) if np.ndim(out) == 0 else out


def rho(G, x, y):
    if isinstance(G, UnitBall):
        return rho_ball(x, y)
    if isinstance(G, HalfSpace):
        return rho_half(x, y)
    raise ParameterError(f"no closed-form hyperbolic metric for {G.spec()}")


@dataclass
class SandwichReport:
    j: float
    rho: float
    k: float
    tol: float
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def sandwich_check(G, x, y, resolution: int = 64, slack: float = 1e-12) -> SandwichReport:
    """Check the standard comparison ``rho/2 <= j <= k <= rho`` at one pair."""
    from .quasihyperbolic import quasihyperbolic_estimate

    if not isinstance(G, (UnitBall, HalfSpace)):
        raise ParameterError("sandwich check needs a ball or half-space")
    j = j_metric(G, x, y)
    r = rho(G, x, y)
    est = quasihyperbolic_estimate(G, x, y, resolution)
    k, tol = est.value, est.tol
    checks = {"half_rho_le_j": 0.5 * r <= j + slack, "j_le_rho": j <= r + slack}
    if isinstance(G, UnitBall):
        checks["j_le_k"] = j <= k + tol
        checks["k_le_rho"] = k <= r + tol
    else:
        checks["k_eq_rho"] = abs(k - r) <= tol
    return SandwichReport(j, r, k, tol, checks)
