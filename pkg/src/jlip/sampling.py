"""Deterministic quasi-random point and pair sampling in canonical domains."""
from __future__ import annotations

import warnings

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .domains import HalfSpace, PuncturedHalfSpace, PuncturedUnitBall, Sector, UnitBall
from .errors import ParameterError
from .geom import norm

PUNCTURE_GUARD = 1e-6
HALF_WIDTH = 2.0
HEIGHT_RANGE = (1e-2, 1e2)
SECTOR_RADII = (1e-3, 1e3)
LOCAL_SCALES = (1e-6, 10.0)
EPS_U = 1e-12


def _base(G):
    if isinstance(G, (PuncturedUnitBall, PuncturedHalfSpace)):
        return G.base
    return G


def point_dims(G) -> int:
    """Number of uniforms consumed per point."""
    B = _base(G)
    if isinstance(B, UnitBall):
        return B.n + 1
    if isinstance(B, HalfSpace):
        return B.n
    if isinstance(B, Sector):
        return 2
    raise ParameterError(f"no sampler for {G!r}")


def _loguni(u, lo, hi):
    return np.exp(np.log(lo) + u * (np.log(hi) - np.log(lo)))


def _direction(u):
    g = ndtri(np.clip(u, EPS_U, 1 - EPS_U))
    nr = norm(g)
    return g / np.where(nr > 0, nr, 1.0)[..., None]


def points_from_uniforms(G, u):
    """Map uniforms of shape ``(m, point_dims(G))`` to points of ``G``.

    Returns ``(points, valid)``; invalid rows fell within the puncture guard.
    """
    B = _base(G)
    u = np.clip(u, EPS_U, 1 - EPS_U)
    if isinstance(B, UnitBall):
        n = B.n
        # radius u^(1/n) makes the density uniform in volume
        x = _direction(u[:, :n]) * (u[:, n] ** (1.0 / n))[:, None]
    elif isinstance(B, HalfSpace):
        n = B.n
        h = (2 * u[:, : n - 1] - 1) * HALF_WIDTH
        x = np.concatenate([h, _loguni(u[:, n - 1:n], *HEIGHT_RANGE)], 1)
    else:
        t = u[:, 0] * B.phi
        r = _loguni(u[:, 1], *SECTOR_RADII)
        x = np.stack([r * np.cos(t), r * np.sin(t)], 1)
    valid = np.asarray(G.contains(x), dtype=bool)
    if isinstance(G, (PuncturedUnitBall, PuncturedHalfSpace)):
        for p in G.puncture_array:
            valid &= norm(x - p) > PUNCTURE_GUARD
    return x, valid


def pair_dims(G) -> int:
    # x, then y (or a direction), then a global/local switch and a local scale
    return 2 * point_dims(G) + 2


def pairs_from_uniforms(G, u):
    """Half global pairs, half local pairs ``y = x + s d(x) e`` with log-uniform ``s``."""
    p = point_dims(G)
    n = G.dim
    x, vx = points_from_uniforms(G, u[:, :p])
    yg, vy = points_from_uniforms(G, u[:, p:2 * p])
    local = u[:, 2 * p] < 0.5
    s = _loguni(np.clip(u[:, 2 * p + 1], EPS_U, 1 - EPS_U), *LOCAL_SCALES)
    e = _direction(u[:, p:p + n])
    dx = G._raw_distance(x)
    yl = x + (s * dx)[:, None] * e
    inside = np.asarray(G.contains(yl), dtype=bool)
    for _ in range(60):
        if inside[local].all():
            break
        s = np.where(inside, s, s / 2)
        yl = x + (s * dx)[:, None] * e
        inside = np.asarray(G.contains(yl), dtype=bool)
    vl = inside & vx
    if isinstance(G, (PuncturedUnitBall, PuncturedHalfSpace)):
        for q in G.puncture_array:
            vl &= norm(yl - q) > PUNCTURE_GUARD
    y = np.where(local[:, None], yl, yg)
    valid = vx & np.where(local, vl, vy)
    return x, y, valid


def sobol_block(dim: int, seed: int, start: int, count: int):
    """Rows ``start .. start+count`` of a scrambled Sobol sequence."""
    eng = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(seed))
    if start:
        eng.fast_forward(start)
    with warnings.catch_warnings():
        # balance warnings concern power-of-two sample sizes, not correctness
        warnings.simplefilter("ignore", UserWarning)
        return eng.random(count)


def sample_points(G, count: int, seed: int = 0):
    """``count`` valid points of ``G`` (deterministic in ``seed``)."""
    out = []
    start = 0
    have = 0
    while have < count:
        u = sobol_block(point_dims(G), seed, start, 2 * (count - have) + 16)
        start += u.shape[0]
        x, ok = points_from_uniforms(G, u)
        out.append(x[ok])
        have += int(ok.sum())
    return np.concatenate(out)[:count]


def log_ladder(lo: float, hi: float, per_decade: int = 40, span=(1e-8, 1e8)):
    """Log-spaced parameters, ``per_decade`` per decade over ``span`` clipped to ``[lo, hi]``."""
    a, b = np.log10(span[0]), np.log10(span[1])
    t = 10.0 ** np.linspace(a, b, int(round((b - a) * per_decade)) + 1)
    return t[(t >= lo) & (t <= hi)]
