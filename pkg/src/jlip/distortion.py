"""Distance-ratio distortion of maps between canonical domains.

The central quantity is ``j_target(f(x), f(y)) / j_source(x, y)``.  Its
supremum is estimated by quasi-random pair sampling, coordinate-wise local
ascent, and evaluation of explicit extremal pair families on log-spaced
parameter ladders.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import moebius as mb
from .domains import (
    HalfSpace,
    PuncturedUnitBall,
    UnitBall,
    _log1p_ratio,
    is_punctured,
)
from .errors import CertificateViolation, DomainViolation, ParameterError
from .geom import as_vector, norm
from .holomorphic import ExpExample, Polynomial, PowerMap, PowerSeries
from .sampling import log_ladder, pair_dims, pairs_from_uniforms, sample_points, sobol_block

J_FLOOR = 1e-13
CERT_SLACK = 1e-9
BLOCK = 100
SHARD = 1000
ASCENT_ROUNDS = 40
MIN_BUDGET = 1000
SPOT_CHECKS = 1000


@dataclass(eq=False)
class MapUnderTest:
    """A map together with the source and target domains its ratio is measured in."""

    map: object
    source: object
    target: object
    kind: str = "moebius"
    params: dict = field(default_factory=dict)
    spot_check: bool = True

    def __post_init__(self):
        if self.source.dim != self.target.dim:
            raise ParameterError("source and target must have the same dimension")
        if self.spot_check:
            x = sample_points(self.source, SPOT_CHECKS, seed=0)
            d = self.target_distance(x)
            w = self.image(x)
            if not (np.all(np.isfinite(w)) and np.all(d > 0) and np.all(self.target.contains(w))):
                raise DomainViolation(f"{self.kind} maps sampled points outside {self.target.spec()}")

    @property
    def dim(self):
        return self.source.dim

    @property
    def is_moebius(self):
        return isinstance(self.map, mb.MoebiusMap)

    def image(self, x):
        x = as_vector(x, self.dim)
        if self.is_moebius:
            return self.map.points(x)
        w = np.asarray(self.map(x[..., 0] + 1j * x[..., 1]))
        return np.stack([w.real, w.imag], -1)

    @property
    def is_identity(self):
        return self.is_moebius and self.map.is_identity and self.source == self.target

    def image_distance(self, x, y):
        if self.is_identity:
            return norm(as_vector(x, self.dim) - as_vector(y, self.dim))
        if self.is_moebius:
            return self.map.image_distance(x, y)
        x = as_vector(x, self.dim)
        y = as_vector(y, self.dim)
        if hasattr(self.map, "image_difference"):
            zx = x[..., 0] + 1j * x[..., 1]
            zy = y[..., 0] + 1j * y[..., 1]
            return np.abs(self.map.image_difference(zx, zy))
        return norm(self.image(x) - self.image(y))

    def target_distance(self, x):
        """Boundary distance of ``f(x)`` in the target, punctures included."""
        x = as_vector(x, self.dim)
        f = self.map
        if self.is_identity:
            return self.source._raw_distance(x)
        if self.is_moebius and (f.is_identity or (f.source and f.target)):
            d = f.target_boundary_distance(x)
        elif isinstance(f, PowerMap):
            d = f.target_boundary_distance(x[..., 0] + 1j * x[..., 1])
        else:
            base = self.target.base if is_punctured(self.target) else self.target
            d = base._raw_distance(self.image(x))
        if is_punctured(self.target):
            if self.is_moebius:
                inv = f.inverse()
                for p in self.target.puncture_array:
                    pre = inv.apply(p)
                    if isinstance(pre, np.ndarray):
                        d = np.minimum(d, f.image_distance(x, np.broadcast_to(pre, x.shape)))
            else:
                w = self.image(x)
                for p in self.target.puncture_array:
                    d = np.minimum(d, norm(w - p))
        return d


def _source_j(m, x, y):
    d = np.minimum(m.source._raw_distance(x), m.source._raw_distance(y))
    return _log1p_ratio(norm(x - y), d)


def ratios(m: MapUnderTest, x, y, check=True):
    """Vectorised ratio; pairs with ``j_source < 1e-13`` give NaN."""
    x = as_vector(x, m.dim)
    y = as_vector(y, m.dim)
    if check and not (np.all(m.source.contains(x)) and np.all(m.source.contains(y))):
        raise DomainViolation(f"points outside {m.source.spec()}")
    js = _source_j(m, x, y)
    dt = np.minimum(m.target_distance(x), m.target_distance(y))
    jt = _log1p_ratio(m.image_distance(x, y), dt)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(js >= J_FLOOR, jt / np.where(js > 0, js, 1.0), np.nan)
    return r


def ratio(m: MapUnderTest, x, y) -> float:
    """``j_target(f(x), f(y)) / j_source(x, y)`` for one pair."""
    x = as_vector(x, m.dim)
    y = as_vector(y, m.dim)
    if np.array_equal(x, y):
        raise ParameterError("ratio is undefined for coincident points")
    if np.any(m.target_distance(np.stack([x, y])) <= 0):
        raise DomainViolation(f"image outside {m.target.spec()}")
    return float(ratios(m, x[None], y[None])[0])


def lipschitz_ratio(m, x, y):
    return ratio(m, x, y)


# sharpness families ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SharpnessFamily:
    """Pairs ``t -> (x(t), y(t))`` along which the ratio tends to a sharp constant."""

    name: str
    t_range: tuple
    limit: str  # where the constant is approached: "0", "1" or "inf"
    pair: Callable
    expected: float | None
    role: str = "upper"  # "upper" families approach the sup, "lower" the inf
    exact: bool = False  # ratio equals ``expected`` for every t
    tol: float = 1e-3  # allowed gap to ``expected`` at the end of the ladder

    @property
    def tolerance(self):
        return 1e-12 if self.exact else self.tol

    def final_index(self, t):
        """Index of the ladder point closest to the limit."""
        return int(np.argmin(t)) if self.limit == "0" else int(np.argmax(t))

    def pairs(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.t_range
        if np.any((t < lo) | (t > hi)):
            raise ParameterError(f"family {self.name}: parameter outside [{lo}, {hi}]")
        x, y = self.pair(t)
        return as_vector(x), as_vector(y)


def _vec(z):
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], -1)


def _unit(v):
    v = as_vector(v)
    return v / norm(v)


def _axis_family(a_hat, map_inv=None, expected=None, role="upper", name="axis-antipodal"):
    # x = t a/|a| = -y, optionally pulled back through an inverse map
    def pair(t):
        u = np.asarray(t)[..., None] * a_hat
        if map_inv is None:
            return u, -u
        return map_inv.points(u), map_inv.points(-u)

    return SharpnessFamily(name, (1e-8, 1 - 1e-8), "0", pair, expected, role)


def families_for(m: MapUnderTest) -> list:
    k = m.kind
    p = m.params
    fams = []
    if k in ("sigma_a", "ball_automorphism"):
        a = as_vector(p["a"])
        na = float(norm(a))
        fams.append(_axis_family(_unit(a), None, 1 + na))
        b = m.map.points(np.zeros(m.dim))
        if norm(b) > 0:
            fams.append(_axis_family(_unit(b), m.map.inverse(), 1 / (1 + na), "lower",
                                     "inverse-axis-antipodal"))
    elif k in ("cayley_h2b", "halfplane_to_disk"):
        a = complex(p.get("a", 1j))
        alpha = float(p.get("alpha", 0.0))
        fams.append(SharpnessFamily(
            "horizontal", (1e-8, 1e8), "inf",
            lambda t: (_vec(a + a.imag * np.asarray(t)), _vec(np.full(np.shape(t), a))), 2.0,
            tol=0.05))
        inv = m.map.inverse()
        rot = np.exp(1j * alpha)
        fams.append(SharpnessFamily(
            "inverse-antipodal", (1e-8, 1 - 1e-8), "0",
            lambda t: (inv.points(_vec(rot * np.asarray(t))), inv.points(_vec(-rot * np.asarray(t)))),
            0.5, "lower", exact=True))
    elif k == "cayley_b2h":
        fams.append(SharpnessFamily(
            "antipodal", (1e-8, 1 - 1e-8), "0",
            lambda t: (_vec(np.asarray(t) + 0j), _vec(-np.asarray(t) + 0j)), 2.0, exact=True))
        inv = m.map.inverse()
        fams.append(SharpnessFamily(
            "inverse-horizontal", (1e-8, 1e4), "inf",
            lambda t: (inv.points(_vec(1j + np.asarray(t))), inv.points(_vec(np.full(np.shape(t), 1j)))),
            0.5, "lower", tol=0.05))
    elif k == "halfspace_inversion":
        a = as_vector(p["a"])
        r = float(p["r"])
        n = m.dim
        e1 = np.eye(n)[0]
        en = np.eye(n)[-1]

        def up(t):
            t = np.asarray(t)[..., None]
            x = np.broadcast_to(a + r * en, t.shape[:-1] + (n,))
            return x, a + r * (t * e1 + en)

        def low(t):
            x, y = up(t)
            return m.map.points(x), m.map.points(y)

        fams.append(SharpnessFamily("horizontal", (1e-8, 1e8), "inf", up, 2.0, tol=0.05))
        fams.append(SharpnessFamily("image-horizontal", (1e-8, 1e8), "inf", low, 0.5, "lower",
                                    tol=0.05))
    elif k == "power":
        kk = m.map.k
        al = np.pi / (4 * kk)
        fams.append(SharpnessFamily(
            "ray", (1e-8, 1 - 1e-8), "0",
            lambda t: (_vec(np.asarray(t) * np.exp(1j * al)), _vec(np.full(np.shape(t), np.exp(1j * al)))),
            # the ray ratio converges at a logarithmic rate
            float(kk), tol=0.1 * kk))
    elif k == "poly":
        c = np.asarray(m.map.coeffs)
        mono = np.count_nonzero(c) == 1
        fams.append(SharpnessFamily(
            "monomial-puncture", (1e-8, 0.5 - 1e-8), "0",
            lambda t: (_vec(np.asarray(t) + 0j), _vec(np.asarray(t) / 2 + 0j)),
            float(m.map.degree) if mono else None, exact=mono))
    elif k == "series":
        c = np.asarray(m.map.coeffs)
        mono = np.count_nonzero(c) == 1 and c[0] == 0
        fams.append(SharpnessFamily(
            "monomial-edge", (1e-8, 0.5), "0",
            lambda e: (_vec(1 - np.asarray(e) + 0j), _vec(np.full(np.shape(e), 0.5 + 0j))),
            1.0 if mono else None, tol=0.05))
    elif k == "expexample":
        fams.append(SharpnessFamily(
            "exp-origin", (1e-8, 1 - 1e-8), "0",
            lambda t: (_vec(np.zeros(np.shape(t)) + 0j), _vec(np.asarray(t) + 0j)),
            2.0 / (math.e - 1.0), tol=1e-4))
    elif k == "conj34":
        a = complex(p["a"])
        u = a / abs(a)
        for nm, d in (("antipodal-along-a", u), ("antipodal-across-a", 1j * u)):
            fams.append(SharpnessFamily(
                nm, (1e-8, 1 - 1e-8), "0",
                lambda t, d=d: (_vec(d * np.asarray(t)), _vec(-d * np.asarray(t))), None))
    return fams


def family_trace(m: MapUnderTest, fam: SharpnessFamily, ladder=None):
    """Ratios along ``fam``; returns ``(t, ratio)`` arrays."""
    if ladder is None:
        ladder = log_ladder(*fam.t_range)
    t = np.asarray(ladder, dtype=float)
    x, y = fam.pairs(t)
    return t, ratios(m, x, y, check=True)


# certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    lower: float | None
    upper: float | None
    source: str


def bound_certificates(m: MapUnderTest) -> Certificate | None:
    """Tightest proven ratio bounds for the kind of map, or None when unknown."""
    k = m.kind
    if k == "identity":
        return Certificate(1.0, 1.0, "isometry")
    if k in ("sigma_a", "ball_automorphism"):
        na = float(norm(as_vector(m.params["a"])))
        return Certificate(1 / (1 + na), 1 + na, "ball-automorphism")
    if m.is_moebius:
        return Certificate(0.5, 2.0, "moebius-onto-image")
    if k == "power":
        return Certificate(None, float(m.map.k), "sector-power")
    if k == "poly":
        return Certificate(None, float(m.map.degree), "punctured-disk-polynomial")
    if k == "series":
        return Certificate(None, 1.0, "l1-series-contraction")
    if k == "expexample":
        return Certificate(None, 2.0, "analytic-self-map-of-disk")
    return None


# supremum search ------------------------------------------------------------

@dataclass
class DistortionReport:
    sup_estimate: float
    witness: tuple
    inf_estimate: float
    inf_witness: tuple
    samples: int
    refinement_iterations: int
    seed: int
    certificate: Certificate | None
    families: dict
    witness_phase: str = "sample"

    @property
    def certified(self) -> bool:
        c = self.certificate
        if c is None:
            return True
        ok = True
        if c.upper is not None:
            ok &= self.sup_estimate <= c.upper + CERT_SLACK
        if c.lower is not None:
            ok &= self.inf_estimate >= c.lower - CERT_SLACK
        return bool(ok)

    def require_certified(self):
        """Raise :class:`CertificateViolation` when an estimate breaks a proven bound."""
        if not self.certified:
            c = self.certificate
            raise CertificateViolation(
                f"estimates [{self.inf_estimate!r}, {self.sup_estimate!r}] outside "
                f"[{c.lower}, {c.upper}] ({c.source})")
        return self


def _ascent(m, x, y, val, rounds=ASCENT_ROUNDS, sign=1.0):
    """Coordinate-wise hill climbing of ``sign * ratio`` from each row, shrinking the step."""
    n = m.dim
    P = np.concatenate([x, y], 1)
    best = sign * val
    h = 0.25 * np.minimum(np.minimum(m.source._raw_distance(x), m.source._raw_distance(y)),
                          norm(x - y))
    steps = np.concatenate([np.eye(2 * n), -np.eye(2 * n)])  # (4n, 2n)
    evals = 0
    for _ in range(rounds):
        C = P[:, None, :] + h[:, None, None] * steps[None]
        cx, cy = C[..., :n].reshape(-1, n), C[..., n:].reshape(-1, n)
        ok = m.source.contains(cx) & m.source.contains(cy)
        if is_punctured(m.source):
            for q in m.source.puncture_array:
                ok &= (norm(cx - q) > 0) & (norm(cy - q) > 0)
        r = np.full(cx.shape[0], np.nan)
        with np.errstate(all="ignore"):
            if ok.any():
                r[ok] = ratios(m, cx[ok], cy[ok], check=False)
        evals += int(ok.sum())
        r = np.where(np.isfinite(r), sign * r, -np.inf).reshape(P.shape[0], -1)
        j = np.argmax(r, 1)
        rb = r[np.arange(P.shape[0]), j]
        up = rb > best
        P[up] = C[np.arange(P.shape[0]), j][up]
        best = np.where(up, rb, best)
        h = np.where(up, h, h / 2)
    return P[:, :n], P[:, n:], sign * best, evals


def _shard(m, seed, start, count):
    """Samples ``start .. start+count`` plus one ascent per block of 100."""
    u = sobol_block(pair_dims(m.source), seed, start, count)
    x, y, valid = pairs_from_uniforms(m.source, u)
    r = np.full(count, np.nan)
    with np.errstate(all="ignore"):
        if valid.any():
            r[valid] = ratios(m, x[valid], y[valid], check=False)
    r = np.where(np.isfinite(r), r, np.nan)
    cands = []  # (value, phase, index, x, y)
    lows = []
    for b in range(0, count, BLOCK):
        blk = r[b:b + BLOCK]
        if np.all(np.isnan(blk)):
            continue
        i = b + int(np.nanargmax(blk))
        cands.append((r[i], 0, start + i, x[i], y[i]))
        i2 = b + int(np.nanargmin(blk))
        lows.append((r[i2], 0, start + i2, x[i2], y[i2]))
    iters = 0
    if cands:
        sx = np.array([c[3] for c in cands])
        sy = np.array([c[4] for c in cands])
        sv = np.array([c[0] for c in cands])
        ax, ay, av, e1 = _ascent(m, sx, sy, sv)
        lx = np.array([c[3] for c in lows])
        ly = np.array([c[4] for c in lows])
        lv = np.array([c[0] for c in lows])
        bx, by, bv, e2 = _ascent(m, lx, ly, lv, sign=-1.0)
        iters = e1 + e2
        for c, xx, yy, vv in zip(list(cands), ax, ay, av):
            cands.append((vv, 1, c[2], xx, yy))
        for c, xx, yy, vv in zip(list(lows), bx, by, bv):
            lows.append((vv, 1, c[2], xx, yy))
    return cands, lows, iters, int(valid.sum())


def _reduce(items, sign=1.0):
    # max by value, ties to the earliest (phase, index)
    return min(items, key=lambda c: (-sign * c[0], c[1], c[2]))


def sup_estimate(m: MapUnderTest, budget: int = 10_000, seed: int = 0, threads: int = 1,
                 use_families: bool = True) -> DistortionReport:
    """Seeded estimate of ``sup j(f(x), f(y)) / j(x, y)`` (and the matching inf)."""
    if budget < MIN_BUDGET:
        raise ParameterError(f"budget must be at least {MIN_BUDGET} samples")
    budget = int(math.ceil(budget / BLOCK) * BLOCK)
    starts = list(range(0, budget, SHARD))
    jobs = [(s, min(SHARD, budget - s)) for s in starts]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(lambda j: _shard(m, seed, *j), jobs))
    else:
        results = [_shard(m, seed, *j) for j in jobs]
    highs = [c for r in results for c in r[0]]
    lows = [c for r in results for c in r[1]]
    iters = sum(r[2] for r in results)
    used = sum(r[3] for r in results)
    traces = {}
    if use_families:
        for fi, fam in enumerate(families_for(m)):
            t, rr = family_trace(m, fam)
            traces[fam.name] = {"t": t, "ratio": rr, "expected": fam.expected, "role": fam.role,
                                "final": fam.final_index(t)}
            xs, ys = fam.pairs(t)
            for li in range(t.size):
                if np.isfinite(rr[li]):
                    item = (float(rr[li]), 2, fi * 10**6 + li, xs[li], ys[li])
                    highs.append(item)
                    lows.append(item)
    if not highs:
        raise ParameterError("no admissible sample pairs")
    hb = _reduce(highs)
    lb = _reduce(lows, -1.0)
    # the reported values are recomputed at the witnesses
    sup = float(ratios(m, hb[3][None], hb[4][None], check=False)[0])
    inf = float(ratios(m, lb[3][None], lb[4][None], check=False)[0])
    return DistortionReport(
        sup_estimate=sup, witness=(hb[3].copy(), hb[4].copy()),
        inf_estimate=inf, inf_witness=(lb[3].copy(), lb[4].copy()),
        samples=used, refinement_iterations=iters, seed=seed,
        certificate=bound_certificates(m), families=traces,
        witness_phase=("sample", "ascent", "family")[hb[1]])


def sample_ratios(m: MapUnderTest, count: int, seed: int = 0):
    """Ratios at the first ``count`` quasi-random pairs (invalid pairs dropped)."""
    u = sobol_block(pair_dims(m.source), seed, 0, count)
    x, y, valid = pairs_from_uniforms(m.source, u)
    x, y = x[valid], y[valid]
    r = ratios(m, x, y, check=False)
    keep = np.isfinite(r)
    return x[keep], y[keep], r[keep]


# conjecture explorer --------------------------------------------------------

def conjectured_constant(a) -> float:
    """``1 + log((2 + |a|)/(2 - |a|)) / log 3``."""
    na = abs(complex(a)) if np.ndim(a) == 0 else float(norm(as_vector(a)))
    return 1.0 + math.log((2 + na) / (2 - na)) / math.log(3.0)


@dataclass
class ConjectureReport:
    a: complex
    report: DistortionReport
    conjectured: float
    gap: float
    within_ceiling: bool


def conj34_map(a) -> MapUnderTest:
    """Möbius map of the disk minus 0 onto the disk minus ``a`` with ``0 -> a``."""
    a = complex(*as_vector(a)) if np.ndim(a) else complex(a)
    if a == 0:
        raise ParameterError("a = 0 is the identity case")
    if abs(a) >= 1:
        raise ParameterError("need |a| < 1")
    f = mb.disk_automorphism(a).inverse()
    src = PuncturedUnitBall(2, ((0.0, 0.0),))
    dst = PuncturedUnitBall(2, ((a.real, a.imag),))
    return MapUnderTest(f, src, dst, "conj34", {"a": a})


def conjecture34_explore(a, budget: int = 10_000, seed: int = 0, threads: int = 1):
    m = conj34_map(a)
    rep = sup_estimate(m, budget, seed, threads)
    c = conjectured_constant(m.params["a"])
    return ConjectureReport(m.params["a"], rep, c, c - rep.sup_estimate,
                            bool(1.0 - CERT_SLACK <= rep.sup_estimate <= 2.0 + CERT_SLACK))


# constructors for the maps under test ------------------------------------------

def identity_mut(G) -> MapUnderTest:
    kind = "ball" if isinstance(G, UnitBall) else "half" if isinstance(G, HalfSpace) else None
    f = mb.identity(G.dim, kind)
    return MapUnderTest(f, G, G, "identity")


def sigma_mut(a) -> MapUnderTest:
    a = as_vector(a)
    G = UnitBall(a.shape[0])
    return MapUnderTest(mb.sigma_a(a), G, G, "sigma_a", {"a": a})


def ball_automorphism_mut(a, A=None) -> MapUnderTest:
    a = as_vector(a)
    G = UnitBall(a.shape[0])
    f = mb.ball_automorphism(a, A)
    kind = "identity" if f.is_identity else "ball_automorphism"
    return MapUnderTest(f, G, G, kind, {"a": a})


def cayley_h2b_mut() -> MapUnderTest:
    return MapUnderTest(mb.cayley_h_to_b(), HalfSpace(2), UnitBall(2), "cayley_h2b",
                        {"a": 1j, "alpha": 0.0})


def cayley_b2h_mut() -> MapUnderTest:
    return MapUnderTest(mb.cayley_b_to_h(), UnitBall(2), HalfSpace(2), "cayley_b2h")


def halfplane_to_disk_mut(a, alpha=0.0) -> MapUnderTest:
    return MapUnderTest(mb.halfplane_to_disk(a, alpha), HalfSpace(2), UnitBall(2),
                        "halfplane_to_disk", {"a": complex(a), "alpha": float(alpha)})


def halfspace_inversion_mut(a, r) -> MapUnderTest:
    a = as_vector(a)
    G = HalfSpace(a.shape[0])
    return MapUnderTest(mb.halfspace_inversion(a, r), G, G, "halfspace_inversion",
                        {"a": a, "r": float(r)})


def holomorphic_mut(f) -> MapUnderTest:
    kind = {PowerMap: "power", Polynomial: "poly", PowerSeries: "series",
            ExpExample: "expexample"}[type(f)]
    return MapUnderTest(f, f.source_domain(), f.target_domain(), kind)
