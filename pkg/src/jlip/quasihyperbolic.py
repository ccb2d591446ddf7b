"""Numerical quasihyperbolic distance.

The estimate is the length of an optimised polyline.  A layered shortest
path over a corridor of nodes around the straight segment gives a start
path; it is then refined level by level (vertex count doubling) by a damped
Newton iteration that moves vertices along the path normal, with vertices
re-spread at equal weighted length before every step.  The reported value is
the Richardson extrapolation of the last two levels; the raw polyline length
is kept as ``upper``.

Everything runs in the plane.  In the ball and the half-space a geodesic
stays in a 2-plane containing both points (through the origin, resp.
vertical), so any dimension reduces to a planar problem.  Sectors and
punctured planar domains are solved directly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import (
    HalfSpace,
    PuncturedHalfSpace,
    PuncturedUnitBall,
    Sector,
    UnitBall,
    check_inside,
    is_punctured,
)
from .errors import ParameterError
from .geom import norm

GX, GW = np.polynomial.legendre.leggauss(4)
GX = (GX + 1) / 2
GW = GW / 2

# corridor half-width in node layers and the geometric lateral spacing
CORRIDOR_J = 16
CORRIDOR_STEP = 0.35
CORRIDOR_BASE = 48
LEVEL_ITERS = (8, 4, 3, 3)
BATCH = 2048


@dataclass
class QHEstimate:
    value: float
    upper: float
    tol: float
    error_estimate: float
    path: np.ndarray | None = None


# Planar distance fields return (d, dx, dy, dxx, dxy, dyy); d <= 0 outside.

def _field_half(x, y):
    z = np.zeros_like(x)
    return y, z, np.ones_like(x), z, z, z


def _field_ball(x, y):
    r = np.hypot(x, y)
    rs = np.where(r > 0, r, 1.0)
    ux, uy = x / rs, y / rs
    return 1 - r, -ux, -uy, -(1 - ux * ux) / rs, (ux * uy) / rs, -(1 - uy * uy) / rs


def _field_point(px, py):
    def f(x, y):
        dx, dy = x - px, y - py
        r = np.hypot(dx, dy)
        rs = np.where(r > 0, r, 1.0)
        ux, uy = dx / rs, dy / rs
        return r, ux, uy, (1 - ux * ux) / rs, -(ux * uy) / rs, (1 - uy * uy) / rs

    return f


def _field_ray(angle):
    # distance to the ray {t e^{i angle}, t >= 0}
    c, s = np.cos(angle), np.sin(angle)
    vertex = _field_point(0.0, 0.0)

    def f(x, y):
        along = x * c + y * s
        across = -x * s + y * c
        sg = np.where(across >= 0, 1.0, -1.0)
        z = np.zeros_like(x)
        line = (np.abs(across), -s * sg, c * sg, z, z, z)
        v = vertex(x, y)
        pick = along >= 0
        return tuple(np.where(pick, a, b) for a, b in zip(line, v))

    return f


def _field_min(fields, inside=None):
    def f(x, y):
        best = fields[0](x, y)
        for g in fields[1:]:
            cand = g(x, y)
            pick = cand[0] < best[0]
            best = tuple(np.where(pick, a, b) for a, b in zip(cand, best))
        if inside is not None:
            ok = inside(x, y)
            best = (np.where(ok, best[0], -1.0),) + best[1:]
        return best

    return f


def _sector_field(phi):
    def inside(x, y):
        t = np.mod(np.arctan2(y, x), 2 * np.pi)
        return (t > 0) & (t < phi)

    return _field_min([_field_ray(0.0), _field_ray(phi)], inside)


def _planar_problem(G, x, y):
    """Map a batch of pairs to planar coordinates and a distance field."""
    if isinstance(G, Sector):
        return _sector_field(G.phi), x, y
    if is_punctured(G):
        if G.n != 2:
            raise ParameterError("quasihyperbolic estimates in punctured domains need n = 2")
        base = _field_ball if isinstance(G, PuncturedUnitBall) else _field_half
        pts = [_field_point(px, py) for px, py in G.puncture_array]
        return _field_min([base] + pts), x, y
    if isinstance(G, (HalfSpace, PuncturedHalfSpace)):
        h = norm(x[:, :-1] - y[:, :-1])
        X = np.stack([np.zeros_like(h), x[:, -1]], -1)
        Y = np.stack([h, y[:, -1]], -1)
        return _field_half, X, Y
    if isinstance(G, (UnitBall, PuncturedUnitBall)):
        if G.n == 2:
            return _field_ball, x, y
        # orthonormal frame of the plane through 0, x, y
        rx = norm(x)
        ref = np.where((rx > 0)[:, None], x, y)
        rr = norm(ref)
        e1 = ref / np.where(rr > 0, rr, 1.0)[:, None]
        y_perp = y - np.sum(y * e1, -1)[:, None] * e1
        X = np.stack([np.sum(x * e1, -1), np.zeros_like(rx)], -1)
        Y = np.stack([np.sum(y * e1, -1), norm(y_perp)], -1)
        return _field_ball, X, Y
    raise ParameterError(f"unsupported domain {G!r}")


def _segments(field, ax, ay, bx, by, hess=True):
    """Weighted length of segments with gradients and Hessian blocks."""
    dx, dy = bx - ax, by - ay
    ell = np.hypot(dx, dy)
    ls = np.where(ell > 0, ell, 1.0)
    ux, uy = dx / ls, dy / ls
    qx = ax[..., None] + GX * dx[..., None]
    qy = ay[..., None] + GX * dy[..., None]
    d, gx, gy, hxx, hxy, hyy = field(qx, qy)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(d > 0, 1 / d, np.inf)
    S = (GW * rho).sum(-1)
    with np.errstate(invalid="ignore"):
        w = ell * S
    if not hess:
        return w
    r2 = rho * rho
    r3 = r2 * rho
    with np.errstate(invalid="ignore"):
        px, py = -gx * r2, -gy * r2
        pxx = 2 * gx * gx * r3 - hxx * r2
        pxy = 2 * gx * gy * r3 - hxy * r2
        pyy = 2 * gy * gy * r3 - hyy * r2
        ca, cb = GW * (1 - GX), GW * GX
        Sax, Say = (px * ca).sum(-1), (py * ca).sum(-1)
        Sbx, Sby = (px * cb).sum(-1), (py * cb).sum(-1)

        def block(c):
            return (pxx * c).sum(-1), (pxy * c).sum(-1), (pyy * c).sum(-1)

        aXX, aXY, aYY = block(GW * (1 - GX) ** 2)
        bXX, bXY, bYY = block(GW * (1 - GX) * GX)
        cXX, cXY, cYY = block(GW * GX**2)
        gA = (-ux * S + ell * Sax, -uy * S + ell * Say)
        gB = (ux * S + ell * Sbx, uy * S + ell * Sby)
        Pxx = (1 - ux * ux) / ls * S
        Pxy = (-ux * uy) / ls * S
        Pyy = (1 - uy * uy) / ls * S
        Haa = (Pxx - 2 * ux * Sax + ell * aXX, Pxy - ux * Say - Sax * uy + ell * aXY,
               Pyy - 2 * uy * Say + ell * aYY)
        Hab = (-Pxx + Sax * ux - ux * Sbx + ell * bXX, -Pxy + Sax * uy - ux * Sby + ell * bXY,
               -Pxy + Say * ux - uy * Sbx + ell * bXY, -Pyy + Say * uy - uy * Sby + ell * bYY)
        Hbb = (Pxx + 2 * ux * Sbx + ell * cXX, Pxy + ux * Sby + Sbx * uy + ell * cXY,
               Pyy + 2 * uy * Sby + ell * cYY)
    return w, gA, gB, Haa, Hab, Hbb


def _length(field, Px, Py):
    with np.errstate(all="ignore"):
        return _segments(field, Px[:, :-1], Py[:, :-1], Px[:, 1:], Py[:, 1:], hess=False).sum(-1)


def _resample(c, targets):
    """Invert the monotone table c(s) at ``targets`` (rows are independent)."""
    F = c.shape[1] - 1
    k = np.clip((c[:, :, None] <= targets[:, None, :]).sum(1) - 1, 0, F - 1)
    c0 = np.take_along_axis(c, k, 1)
    c1 = np.take_along_axis(c, k + 1, 1)
    frac = (targets - c0) / np.where(c1 > c0, c1 - c0, 1.0)
    return k, np.clip(frac, 0.0, 1.0)


def _corridor(field, X, Y, M):
    """Layered shortest path through lateral node columns along the segment."""
    B = X.shape[0]
    F = CORRIDOR_BASE
    s = np.linspace(0, 1, F + 1)
    D = Y - X
    px = X[:, 0, None] + s * D[:, 0, None]
    py = X[:, 1, None] + s * D[:, 1, None]
    with np.errstate(all="ignore"):
        w = _segments(field, px[:, :-1], py[:, :-1], px[:, 1:], py[:, 1:], hess=False)
    # a segment through a puncture has infinite weight; spread uniformly instead
    w = np.where(np.isfinite(w).all(1, keepdims=True), w, 1.0)
    c = np.concatenate([np.zeros((B, 1)), np.cumsum(w, 1)], 1)
    c /= c[:, -1:]
    tg = np.broadcast_to(np.linspace(0, 1, M + 1), (B, M + 1))
    k, frac = _resample(c, tg)
    tau = s[k] + frac * (s[1] - s[0])
    bx = X[:, 0, None] + tau * D[:, 0, None]
    by = X[:, 1, None] + tau * D[:, 1, None]
    nn = np.hypot(D[:, 0], D[:, 1])
    nx, ny = -D[:, 1] / nn, D[:, 0] / nn
    db = field(bx, by)[0]
    db = np.maximum(db, 0.05 * np.minimum(np.abs(db).max(1, keepdims=True), nn[:, None]))
    J = CORRIDOR_J
    sig = np.sinh(np.arange(-J, J + 1) * CORRIDOR_STEP)
    K = 2 * J + 1
    Nx = bx[..., None] + db[..., None] * sig * nx[:, None, None]
    Ny = by[..., None] + db[..., None] * sig * ny[:, None, None]
    cost = np.full((B, K), np.inf)
    cost[:, J] = 0.0
    back = np.zeros((B, M, K), dtype=np.int16)
    for i in range(M):
        best = np.full((B, K), np.inf)
        arg = np.zeros((B, K), dtype=np.int16)
        for o in (-2, -1, 0, 1, 2):
            dst = np.arange(max(0, o), K + min(0, o))
            src = dst - o
            ax, ay = Nx[:, i, src], Ny[:, i, src]
            ex, ey = Nx[:, i + 1, dst], Ny[:, i + 1, dst]
            dm = field((ax + ex) / 2, (ay + ey) / 2)[0]
            with np.errstate(all="ignore"):
                wg = np.where(dm > 0, np.hypot(ex - ax, ey - ay) / dm, np.inf)
            c2 = cost[:, src] + wg
            cur = best[:, dst]
            upd = c2 < cur
            best[:, dst] = np.where(upd, c2, cur)
            arg[:, dst] = np.where(upd, src, arg[:, dst])
        cost = best
        back[:, i] = arg
    ar = np.arange(B)
    idx = np.full(B, J)
    Px = np.empty((B, M + 1))
    Py = np.empty((B, M + 1))
    Px[:, M], Py[:, M] = Nx[:, M, J], Ny[:, M, J]
    for i in range(M - 1, -1, -1):
        idx = back[ar, i, idx]
        Px[:, i], Py[:, i] = Nx[ar, i, idx], Ny[ar, i, idx]
    return Px, Py


def _equidistribute(field, Px, Py):
    B, N1 = Px.shape
    with np.errstate(all="ignore"):
        w = _segments(field, Px[:, :-1], Py[:, :-1], Px[:, 1:], Py[:, 1:], hess=False)
    good = np.isfinite(w).all(1)
    w = np.where(good[:, None], w, 1.0)
    c = np.concatenate([np.zeros((B, 1)), np.cumsum(w, 1)], 1)
    tg = np.linspace(0, 1, N1) * c[:, -1:]
    k, f = _resample(c, tg)
    x0, x1 = np.take_along_axis(Px, k, 1), np.take_along_axis(Px, k + 1, 1)
    y0, y1 = np.take_along_axis(Py, k, 1), np.take_along_axis(Py, k + 1, 1)
    Qx, Qy = x0 + f * (x1 - x0), y0 + f * (y1 - y0)
    Qx[:, 0], Qy[:, 0], Qx[:, -1], Qy[:, -1] = Px[:, 0], Py[:, 0], Px[:, -1], Py[:, -1]
    return np.where(good[:, None], Qx, Px), np.where(good[:, None], Qy, Py)


def _newton(field, Px, Py, iters, lam):
    """Damped Newton on the weighted length, vertices moving along normals."""
    B, n = Px.shape[0], Px.shape[1] - 2
    for _ in range(iters):
        Px, Py = _equidistribute(field, Px, Py)
        with np.errstate(all="ignore"):
            w, gA, gB, Haa, Hab, Hbb = _segments(field, Px[:, :-1], Py[:, :-1], Px[:, 1:], Py[:, 1:])
            F = w.sum(-1)
            tx, ty = Px[:, 2:] - Px[:, :-2], Py[:, 2:] - Py[:, :-2]
            tn = np.hypot(tx, ty)
            tn = np.where(tn > 0, tn, 1.0)
            nx, ny = -ty / tn, tx / tn
            g = (gB[0][:, :-1] + gA[0][:, 1:]) * nx + (gB[1][:, :-1] + gA[1][:, 1:]) * ny
            Dxx = Hbb[0][:, :-1] + Haa[0][:, 1:]
            Dxy = Hbb[1][:, :-1] + Haa[1][:, 1:]
            Dyy = Hbb[2][:, :-1] + Haa[2][:, 1:]
            d = nx * nx * Dxx + 2 * nx * ny * Dxy + ny * ny * Dyy
            Uxx, Uxy, Uyx, Uyy = (h[:, 1:-1] for h in Hab)
            n0x, n0y, n1x, n1y = nx[:, :-1], ny[:, :-1], nx[:, 1:], ny[:, 1:]
            e = n0x * (Uxx * n1x + Uxy * n1y) + n0y * (Uyx * n1x + Uyy * n1y)
            d = d + lam[:, None] * np.abs(d)
            ep = np.abs(np.pad(e, ((0, 0), (0, 1)))) + np.abs(np.pad(e, ((0, 0), (1, 0))))
            d = np.where(d > 0, d, np.abs(d) + 2 * ep + 1e-300)
            # tridiagonal solve for the normal step
            cp = np.zeros((B, n))
            dp = np.empty((B, n))
            r = -g
            if n > 1:
                cp[:, 0] = e[:, 0] / d[:, 0]
            dp[:, 0] = r[:, 0] / d[:, 0]
            for j in range(1, n):
                den = d[:, j] - e[:, j - 1] * cp[:, j - 1]
                if j < n - 1:
                    cp[:, j] = e[:, j] / den
                dp[:, j] = (r[:, j] - e[:, j - 1] * dp[:, j - 1]) / den
            s = np.empty((B, n))
            s[:, -1] = dp[:, -1]
            for j in range(n - 2, -1, -1):
                s[:, j] = dp[:, j] - cp[:, j] * s[:, j + 1]
        s = np.where(np.isfinite(s), s, 0.0)
        best, bx, by = F.copy(), Px.copy(), Py.copy()
        acc = np.zeros(B, bool)
        for alpha in (1.0, 0.5, 0.25):
            Nx, Ny = Px.copy(), Py.copy()
            Nx[:, 1:-1] += alpha * s * nx
            Ny[:, 1:-1] += alpha * s * ny
            Fn = _length(field, Nx, Ny)
            ok = np.isfinite(Fn) & ((Fn < best) | ~np.isfinite(best)) & ~acc
            bx[ok], by[ok] = Nx[ok], Ny[ok]
            best = np.where(ok, Fn, best)
            acc |= ok
        Px, Py = bx, by
        lam = np.where(acc, np.maximum(lam / 4, 1e-8), lam * 8)
    return Px, Py, _length(field, Px, Py), lam


def _refine(P):
    Q = np.empty((P.shape[0], 2 * P.shape[1] - 1))
    Q[:, 0::2] = P
    Q[:, 1::2] = (P[:, :-1] + P[:, 1:]) / 2
    return Q


def _levels(resolution):
    levels = [resolution]
    while len(levels) < len(LEVEL_ITERS) and levels[0] % 2 == 0 and levels[0] // 2 >= 4:
        levels.insert(0, levels[0] // 2)
    return levels


def nominal_tolerance(resolution: int) -> float:
    """Calibrated error budget, 1e-3 at resolution 64 and shrinking quadratically."""
    return 1e-3 * (64.0 / resolution) ** 2


def _solve_planar(field, X, Y, resolution, keep_path):
    levels = _levels(resolution)
    iters = LEVEL_ITERS[-len(levels):]
    Px, Py = _corridor(field, X, Y, levels[0])
    lam = np.full(X.shape[0], 1e-4)
    lengths = []
    for lev, it in zip(levels, iters):
        while Px.shape[1] - 1 < lev:
            Px, Py = _refine(Px), _refine(Py)
        Px, Py, L, lam = _newton(field, Px, Py, it, lam)
        lengths.append(L)
    upper = lengths[-1]
    if len(lengths) > 1:
        value = upper + (upper - lengths[-2]) / 3.0
        err = np.abs(upper - lengths[-2]) / 3.0
    else:
        value, err = upper, np.full_like(upper, np.nan)
    path = np.stack([Px, Py], -1) if keep_path else None
    return value, upper, err, path


def quasihyperbolic_batch(G, x, y, resolution: int = 64):
    """Estimate ``k_G`` for stacks of pairs; returns (value, upper, error_estimate)."""
    if int(resolution) != resolution or resolution < 4:
        raise ParameterError("resolution must be an integer >= 4")
    resolution = int(resolution)
    x = np.atleast_2d(check_inside(G, x))
    y = np.atleast_2d(check_inside(G, y))
    x, y = np.broadcast_arrays(x, y)
    field, X, Y = _planar_problem(G, x, y)
    B = X.shape[0]
    value = np.zeros(B)
    upper = np.zeros(B)
    err = np.zeros(B)
    live = np.flatnonzero(norm(X - Y) > 0)
    for lo in range(0, live.size, BATCH):
        sel = live[lo:lo + BATCH]
        v, u, e, _ = _solve_planar(field, X[sel], Y[sel], resolution, False)
        value[sel], upper[sel], err[sel] = v, u, e
    return value, upper, err


def quasihyperbolic_estimate(G, x, y, resolution: int = 64, keep_path: bool = False) -> QHEstimate:
    """Estimate the quasihyperbolic distance between two points of ``G``."""
    if int(resolution) != resolution or resolution < 4:
        raise ParameterError("resolution must be an integer >= 4")
    resolution = int(resolution)
    xv = check_inside(G, x)
    yv = check_inside(G, y)
    tol = nominal_tolerance(resolution)
    if xv.ndim != 1 or yv.ndim != 1:
        raise ParameterError("use quasihyperbolic_batch for stacks of points")
    if norm(xv - yv) == 0:
        return QHEstimate(0.0, 0.0, tol, 0.0, None)
    field, X, Y = _planar_problem(G, xv[None], yv[None])
    v, u, e, path = _solve_planar(field, X, Y, resolution, keep_path)
    return QHEstimate(float(v[0]), float(u[0]), tol, float(e[0]),
                      None if path is None else path[0])
