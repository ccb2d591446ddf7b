"""Self-verification suites: every bound and identity the package relies on,
checked numerically with measured values."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distortion as ds
from . import lemmas as lm
from . import moebius as mb
from .domains import HalfSpace, Sector, UnitBall, j_metric, rho
from .geom import (
    HyperplaneReflection,
    OrthogonalMap,
    SphereInversion,
    conjugate_point,
    inversion_distance,
    norm,
)
from .holomorphic import (
    ExpExample,
    Polynomial,
    PowerMap,
    exp_example_j_pair,
    exp_example_small_t_ratio,
    power_difference_bound,
    power_log_bound,
    random_l1_series,
    random_monomial_product,
)
from .quasihyperbolic import quasihyperbolic_batch
from .sampling import log_ladder, pair_dims, pairs_from_uniforms, sample_points, sobol_block
from .specs import parse_map

SLACK = 1e-9
EXACT = 1e-12


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    value: float | None = None
    detail: str = ""


class _Suite:
    def __init__(self, name):
        self.name = name
        self.checks = []

    def add(self, name, passed, value=None, detail=""):
        v = None if value is None else float(value)
        self.checks.append(Check(self.name, name, bool(passed), v, detail))


def _pairs(G, count, seed):
    x, y, ok = pairs_from_uniforms(G, sobol_block(pair_dims(G), seed, 0, count))
    return x[ok], y[ok]


def _rng(seed, salt):
    return np.random.default_rng([seed, salt])


def _in_range(r, lo, hi):
    r = r[np.isfinite(r)]
    return bool(np.all((r >= lo) & (r <= hi))), float(r.min()), float(r.max())


# geometry -------------------------------------------------------------------

def geometry_suite(samples=10_000, seed=0, **_):
    S = _Suite("geometry")
    rng = _rng(seed, 1)
    n = 3
    x = rng.normal(size=(samples, n))
    y = rng.normal(size=(samples, n))
    refl = HyperplaneReflection(np.array([1.0, -2.0, 0.5]), 0.3)
    inv = SphereInversion(np.array([0.2, -0.1, 0.4]), 0.7)
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    orth = OrthogonalMap(Q)
    for nm, g in (("reflection", refl), ("inversion", inv)):
        err = np.max(norm(g.map_points(g.map_points(x)) - x) / np.maximum(1, norm(x)))
        S.add(f"{nm} is an involution", err <= EXACT, err)
    err = np.max(np.abs(norm(orth.map_points(x)) - norm(x)) / np.maximum(1, norm(x)))
    S.add("orthogonal map preserves norms", err <= EXACT, err)
    d_push = norm(inv.map_points(x) - inv.map_points(y))
    d_form = inversion_distance(inv, x, y)
    err = np.max(np.abs(d_push - d_form) / d_push)
    # the pushed-forward difference itself carries rounding near the centre
    S.add("inversion distance formula", err <= 1e-10, err)
    z = x[norm(x) > 1e-3]
    err = max(float(norm(conjugate_point(conjugate_point(v)) - v) / norm(v)) for v in z[:1000])
    S.add("conjugate point is an involution", err <= EXACT, err)
    # sigma_a distance identity and boundary gap
    a = np.array([0.3, -0.4, 0.5])
    B = UnitBall(3)
    pts = sample_points(B, 2 * samples, seed)
    bx, by = pts[:samples], pts[samples:]
    s = mb.sigma_a(a)
    lhs = norm(s.points(bx) - s.points(by))
    rhs = s.image_distance(bx, by)
    err = np.max(np.abs(lhs - rhs) / rhs)
    S.add("sigma_a image distance identity", err <= EXACT, err)
    direct, via = mb.sigma_boundary_gap(a, bx)
    err = np.max(np.abs(direct - via))
    S.add("sigma_a boundary gap identity", err <= EXACT, err)
    # domain preservation on samples
    maps = ["sigma:a=0.5,0", "ballaut:a=0.3,0.4:angle=0.5", "cayley:h2b", "cayley:b2h",
            "h2d:a=0.5,2:alpha=0.3", "hsinv:a=0,0,0:r=1.5", "conj34:a=0.5,0"]
    for spec in maps:
        m = parse_map(spec)
        px = sample_points(m.source, 1000, seed)
        ok = bool(np.all(m.target.contains(m.image(px))))
        S.add(f"{spec} maps samples into its target", ok)
    return S.checks


# scalar lemmas --------------------------------------------------------------

def lemma_suite(samples=10_000, seed=0, **_):
    S = _Suite("lemmas")
    ks = (1.5, 2.0, 3.0, 5.0)
    r = np.linspace(0, 1, 1002)[1:-1]
    for k in ks:
        th = np.linspace(0, np.pi / (2 * k), 1002)[1:-1]
        S.add(f"f1 decreasing, k={k}", lm.is_monotone(lm.f1(k, th), "decreasing"))
        for tn, t in (("pi/(4k)", np.pi / (4 * k)), ("pi/(2k)-1e-3", np.pi / (2 * k) - 1e-3)):
            S.add(f"f2 decreasing, k={k}, theta={tn}", lm.is_monotone(lm.f2(k, t, r), "decreasing"))
            v = lm.f3(k, t, r)
            S.add(f"f3 decreasing, k={k}, theta={tn}", lm.is_monotone(v, "decreasing"))
            lo = k * math.sin(t) / math.sin(k * t)
            S.add(f"f3 within (k sin t/sin kt, k), k={k}, theta={tn}",
                  np.all((v > lo) & (v < k)), v.max())
            g1, g2 = lm.ray_pair(k, t)
            S.add(f"monotone quotient rule for f3, k={k}, theta={tn}",
                  lm.monotone_lhopital(g1, g2, (1e-3, 1 - 1e-6), "decreasing", anchor="right"))
    cs = np.round(np.arange(0.1, 1.0, 0.1), 1)
    th = np.linspace(0, 1, 1001)[1:]
    ok_f = ok_g = ok_gc = True
    for c in cs:
        g = lm.arth_ratio(c, th[:-1])
        ok_g &= lm.is_monotone(g, "decreasing")
        ok_gc &= bool(np.all(g <= c + EXACT))
        for d in cs:
            f = lm.log_ratio_f(c, d, th)
            ok_f &= lm.is_monotone(f, "increasing") and bool(np.all(f <= f[-1] + EXACT))
    S.add("log ratio increasing and bounded by its t=1 value", ok_f)
    S.add("artanh ratio decreasing", ok_g)
    S.add("artanh ratio bounded by c", ok_gc)
    rng = _rng(seed, 2)
    c, d = rng.uniform(1e-6, 1 - 1e-6, (2, samples))
    t = rng.uniform(1e-6, 1, samples)
    lhs, rhs = lm.product_inequality_sides(c, d, t)
    S.add("product inequality on random triples", np.all(lhs <= rhs + EXACT), np.max(lhs - rhs))
    # ball identities on 10^5 pairs
    B = UnitBall(3)
    pts = sample_points(B, 200_000, seed)
    a, b = pts[:100_000], pts[100_000:]
    a = a[norm(a) > 1e-3]
    b = b[: a.shape[0]]
    lhs, rhs, scale = mb.ball_identity_sides(a, b)
    err = np.max(np.abs(lhs - rhs) / scale)
    S.add("ball identity |a|^2|b-a*|^2 - |b-a|^2 = (1-|a|^2)(1-|b|^2)", err <= EXACT, err)
    lo, q, hi = mb.chordal_quotient_bounds(a, b)
    S.add("chordal quotient radial bounds", np.all((lo <= q * (1 + EXACT)) & (q <= hi * (1 + EXACT))))
    # complex power inequalities on 10^5 samples
    m = 100_000
    z = rng.uniform(0, 4, m) * np.exp(1j * rng.uniform(0, 2 * np.pi, m))
    p = rng.integers(1, 17, m)
    lhs, rhs = power_log_bound(z, p)
    S.add("log(1+|z^p-1|) <= p log(1+|z-1|)", np.all(lhs <= rhs * (1 + EXACT) + EXACT),
          np.max(lhs - rhs))
    n = rng.integers(1, 9, m)
    bad = 0
    for nn in range(1, 9):
        sel = n == nn
        cnt = int(sel.sum())
        tx = rng.uniform(0, np.pi / (2 * nn), cnt)
        x = rng.uniform(0.01, 5, cnt) * np.exp(1j * tx)
        y = rng.uniform(0.01, 5, cnt) * np.exp(1j * rng.uniform(0, 2 * np.pi, cnt))
        ok = tx > 0
        lhs, rhs = power_difference_bound(nn, x[ok], y[ok], tx[ok])
        bad += int(np.sum(lhs > rhs * (1 + EXACT)))
    S.add("1 + |x^n-y^n|/(|x|^n sin nt) <= (1 + |x-y|/(|x| sin t))^n", bad == 0, bad)
    return S.checks


# metric sandwich ------------------------------------------------------------

def sandwich_suite(samples=10_000, seed=0, resolution=64, **_):
    S = _Suite("sandwich")
    for G in (UnitBall(2), UnitBall(3), HalfSpace(2), HalfSpace(3)):
        x, y = _pairs(G, samples, seed)
        j = j_metric(G, x, y)
        p = rho(G, x, y)
        S.add(f"rho/2 <= j <= rho in {G.spec()}",
              np.all((0.5 * p <= j + EXACT) & (j <= p + EXACT)), np.max(j - p))
        k, _, _ = quasihyperbolic_batch(G, x, y, resolution)
        S.add(f"j <= k_est + 1e-3 in {G.spec()}", np.all(j <= k + 1e-3), np.max(j - k))
        if isinstance(G, HalfSpace):
            err = np.max(np.abs(k - p))
            S.add(f"|k_est - rho| <= 1e-3 in {G.spec()}", err <= 1e-3, err)
    for G in (UnitBall(2), HalfSpace(3), Sector(np.pi / 3)):
        z = sample_points(G, 3 * samples, seed + 1)
        a, b, c = z[:samples], z[samples:2 * samples], z[2 * samples:]
        gap = np.max(j_metric(G, a, c) - j_metric(G, a, b) - j_metric(G, b, c))
        S.add(f"triangle inequality in {G.spec()}", gap <= EXACT, gap)
    for G in (HalfSpace(2), Sector(np.pi / 3)):
        x, y = _pairs(G, samples, seed)
        err = np.max(np.abs(j_metric(G, 3.7 * x, 3.7 * y) - j_metric(G, x, y)))
        S.add(f"j invariant under scaling in {G.spec()}", err <= EXACT, err)
    return S.checks


# theorem-level bounds -------------------------------------------------------

_MOEBIUS = ["cayley:h2b", "cayley:b2h", "h2d:a=0.5,2:alpha=0.3", "hsinv:a=0,0:r=1",
            "hsinv:a=0.5,0,0:r=2", "conj34:a=0.3,0", "conj34:a=0.5,0", "conj34:a=0.8,0"]


def theorem_suite(samples=10_000, seed=0, threads=1, **_):
    S = _Suite("theorems")
    for spec in ("identity:ball2", "identity:half3"):
        rep = ds.sup_estimate(parse_map(spec), max(samples, ds.MIN_BUDGET), seed, threads)
        S.add(f"{spec} has ratio exactly 1", rep.sup_estimate == 1.0 == rep.inf_estimate,
              rep.sup_estimate)
    dirs = {2: np.array([0.6, 0.8]), 3: np.array([1.0, 2.0, 2.0]) / 3}
    for n, u in dirs.items():
        for na in (0.1, 0.3, 0.5, 0.7, 0.9):
            m = ds.sigma_mut(na * u)
            _, _, r = ds.sample_ratios(m, samples, seed)
            ok, lo, hi = _in_range(r, 1 / (1 + na) - SLACK, 1 + na + SLACK)
            S.add(f"sigma_a ratios within [1/(1+|a|), 1+|a|], n={n}, |a|={na}", ok, hi)
            fam = ds.families_for(m)[0]
            v = ds.family_trace(m, fam, [1e-4])[1][0]
            S.add(f"sigma_a antipodal pair at t=1e-4 near 1+|a|, n={n}, |a|={na}",
                  abs(v - (1 + na)) <= 1e-3, v)
    for spec in _MOEBIUS + ["sigma:a=0.5,0", "ballaut:a=0.3,0.4:angle=0.5"]:
        _, _, r = ds.sample_ratios(parse_map(spec), samples, seed)
        ok, lo, hi = _in_range(r, 0.5 - SLACK, 2 + SLACK)
        S.add(f"{spec} ratios within [1/2, 2]", ok, hi, f"min {lo:.17g}")
    m = parse_map("cayley:h2b")
    t, r = ds.family_trace(m, ds.families_for(m)[0])
    S.add("half-plane to disk horizontal family reaches [1.95, 2] at t=1e8",
          1.95 <= r[-1] <= 2.0, r[-1])
    S.add("half-plane to disk horizontal family increasing", lm.is_monotone(r, "increasing"))
    S.add("half-plane to disk horizontal family bounded by 2", np.all(r <= 2 + SLACK), r.max())
    m = parse_map("cayley:b2h")
    tt = np.round(np.arange(0.1, 1.0, 0.1), 1)
    r = ds.ratios(m, np.stack([tt, 0 * tt], 1), np.stack([-tt, 0 * tt], 1))
    err = np.max(np.abs(r - 2))
    S.add("disk to half-plane antipodal pairs give exactly 2", err <= EXACT, err)
    for k in (2, 3, 5):
        m = ds.holomorphic_mut(PowerMap(k))
        _, _, r = ds.sample_ratios(m, samples, seed)
        S.add(f"power map k={k} ratios <= k", np.all(r <= k + SLACK), r.max())
        rng = _rng(seed, 10 + k)
        th = rng.uniform(0, np.pi / k, samples)
        th = th[th > 0]
        r1, r2 = np.exp(rng.uniform(-6, 6, (2, th.size)))
        e = np.stack([np.cos(th), np.sin(th)], 1)
        rr = ds.ratios(m, r1[:, None] * e, r2[:, None] * e)
        tm = np.minimum(th, np.pi / k - th)
        lo = k * np.sin(tm) / np.sin(k * tm)
        ok = np.isfinite(rr)
        S.add(f"power map k={k} common-argument ratios within [k sin t/sin kt, k]",
              np.all((rr[ok] >= lo[ok] - SLACK) & (rr[ok] <= k + SLACK)))
        v = lm.f3(k, np.pi / (4 * k), 1e-10)
        S.add(f"ray ratio f3 at r=1e-10 within 0.3 of k={k}", abs(v - k) <= 0.3, v)
    # polynomials z^m Q on the punctured disk
    rng = _rng(seed, 20)
    ss, tt = rng.uniform(1e-9, 0.5, (2, samples))
    for p in range(2, 7):
        m = ds.holomorphic_mut(Polynomial((0,) * (p - 1) + (1,)))
        sel = ss != tt
        r = ds.ratios(m, np.stack([ss[sel], 0 * ss[sel]], 1), np.stack([tt[sel], 0 * tt[sel]], 1))
        err = np.nanmax(np.abs(r - p))
        S.add(f"z^{p} on (0, 1/2) has ratio exactly {p}", err <= EXACT, err)
    n_maps = max(samples // 10, 100)
    P = ds.PuncturedUnitBall(2, ((0.0, 0.0),))
    px, py = _pairs(P, 100, seed)
    worst = -np.inf
    worst_schwarz = -np.inf
    B2 = UnitBall(2)
    bx, by = _pairs(B2, 100, seed)
    for i in range(n_maps):
        f = random_monomial_product(rng)
        m = ds.MapUnderTest(f, P, P, "poly")
        worst = max(worst, float(np.nanmax(ds.ratios(m, px, py, check=False) - f.degree)))
        ms = ds.MapUnderTest(f, B2, B2, "analytic", spot_check=False)
        worst_schwarz = max(worst_schwarz, float(np.nanmax(ds.ratios(ms, bx, by, check=False))))
    S.add(f"{n_maps} products z^m Q have ratios <= degree", worst <= SLACK, worst)
    worst = -np.inf
    for i in range(n_maps):
        f = random_l1_series(rng)
        m = ds.MapUnderTest(f, B2, B2, "series")
        r = ds.ratios(m, bx, by, check=False)
        worst = max(worst, float(np.nanmax(r)))
        worst_schwarz = max(worst_schwarz, float(np.nanmax(r)))
    S.add(f"{n_maps} l1-bounded series contract j", worst <= 1 + EXACT, worst)
    me = ds.holomorphic_mut(ExpExample())
    worst_schwarz = max(worst_schwarz, float(np.nanmax(ds.ratios(me, bx, by, check=False))))
    S.add("analytic self-maps of the disk have ratios <= 2", worst_schwarz <= 2 + SLACK, worst_schwarz)
    for p in (2, 3):
        m = ds.holomorphic_mut(Polynomial((0,) * (p - 1) + (1,)))
        m = ds.MapUnderTest(m.map, B2, B2, "series", spot_check=False)
        v = float(ds.ratios(m, [[1 - 1e-6, 0]], [[0.5, 0]])[0])
        S.add(f"z^{p} edge pair at t=1-1e-6, s=1/2 within 1e-2 of 1", abs(v - 1) <= 1e-2, v)
    # exponential example
    for k in range(1, 11):
        ji, jo = exp_example_j_pair(k)
        ei = math.log((math.exp(k + 1) + 1) / (math.exp(k) + 1))
        eo = math.exp(k) * (math.e - 1)
        err = max(abs(ji - ei) / ei, abs(jo - eo) / eo)
        S.add(f"exponential example j values at k={k}", err <= 1e-9, err)
    v = exp_example_small_t_ratio(1e-6)
    S.add("exponential example small-t ratio near 2/(e-1)", abs(v - 2 / (math.e - 1)) <= 1e-4, v)
    m = parse_map("hsinv:a=0,0:r=1")
    _, _, r = ds.sample_ratios(m, samples, seed)
    S.add("half-space inversion ratios <= 2", np.all(r <= 2 + SLACK), r.max())
    v = float(ds.ratios(m, [[0, 1]], [[1e8, 1]])[0])
    S.add("half-space inversion pair (i, t+i) at t=1e8 >= 1.95", v >= 1.95, v)
    # certificates of the full search
    for spec in ["sigma:a=0.5,0", "cayley:h2b", "cayley:b2h", "hsinv:a=0,0:r=1", "power:k=2",
                 "power:k=3", "poly:c=0,0,1", "series:c=0,0.5,0.5", "expexample"]:
        rep = ds.sup_estimate(parse_map(spec), max(samples, ds.MIN_BUDGET), seed, threads)
        S.add(f"{spec} search stays within its certificate", rep.certified, rep.sup_estimate)
    for na in (0.3, 0.5, 0.8):
        c = ds.conjecture34_explore(complex(na, 0), max(samples, ds.MIN_BUDGET), seed, threads)
        S.add(f"punctured-disk Moebius map, |a|={na}: estimate in [1, 2]", c.within_ceiling,
              c.report.sup_estimate, f"conjectured {c.conjectured:.17g}, gap {c.gap:.17g}")
    return S.checks


# family traces --------------------------------------------------------------

FAMILY_MAPS = ["sigma:a=0.5,0", "ballaut:a=0.3,0.4:angle=0.5", "cayley:h2b", "cayley:b2h",
               "h2d:a=0.5,2:alpha=0.3", "hsinv:a=0,0:r=1", "power:k=2", "power:k=3",
               "power:k=5", "poly:c=0,0,1", "series:c=0,0,1", "expexample", "conj34:a=0.5,0"]


def family_suite(samples=10_000, seed=0, rows=None, **_):
    S = _Suite("families")
    for spec in FAMILY_MAPS:
        m = parse_map(spec)
        cert = ds.bound_certificates(m)
        for fam in ds.families_for(m):
            t, r = ds.family_trace(m, fam, log_ladder(*fam.t_range))
            if rows is not None:
                rows.extend((f"{spec}/{fam.name}", float(a), float(b)) for a, b in zip(t, r))
            if cert is not None and cert.upper is not None:
                S.add(f"{spec} {fam.name} stays below {cert.upper:g}",
                      np.nanmax(r) <= cert.upper + SLACK, np.nanmax(r))
            if cert is not None and cert.lower is not None:
                S.add(f"{spec} {fam.name} stays above {cert.lower:g}",
                      np.nanmin(r) >= cert.lower - SLACK, np.nanmin(r))
            if fam.expected is not None:
                v = r[fam.final_index(t)]
                S.add(f"{spec} {fam.name} ends within {fam.tolerance:g} of {fam.expected:.6g}",
                      abs(v - fam.expected) <= fam.tolerance, v)
    return S.checks


# reproducibility ------------------------------------------------------------

def reproducibility_suite(samples=10_000, seed=0, threads=4, **_):
    S = _Suite("reproducibility")
    for spec in ("sigma:a=0.5,0", "power:k=3", "conj34:a=0.5,0"):
        m = parse_map(spec)
        b = max(samples, ds.MIN_BUDGET)
        r1 = ds.sup_estimate(m, b, seed, 1)
        r2 = ds.sup_estimate(m, b, seed, 1)
        r3 = ds.sup_estimate(m, b, seed, max(threads, 2))
        same = all(_same(r1, r) for r in (r2, r3))
        S.add(f"{spec} search is identical across runs and thread counts", same, r1.sup_estimate)
    return S.checks


def _same(a, b):
    return (a.sup_estimate == b.sup_estimate and a.inf_estimate == b.inf_estimate
            and all(np.array_equal(u, v) for u, v in zip(a.witness, b.witness))
            and a.samples == b.samples and a.refinement_iterations == b.refinement_iterations)


SUITES = {
    "geometry": geometry_suite,
    "lemmas": lemma_suite,
    "sandwich": sandwich_suite,
    "theorems": theorem_suite,
    "families": family_suite,
    "reproducibility": reproducibility_suite,
}


def run(suite="all", samples=10_000, seed=0, threads=1, rows=None):
    """Run one suite (or ``"all"``) and return its list of :class:`Check`."""
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for nm in names:
        if nm not in SUITES:
            raise KeyError(nm)
        out.extend(SUITES[nm](samples=samples, seed=seed, threads=threads, rows=rows))
    return out
