"""Möbius transformations as words in reflections, inversions and isometries.

Planar orientation-preserving maps also carry the coefficients ``(a, b, c, d)``
of ``z -> (a z + b) / (c z + d)``; those are used for evaluation because
they stay accurate far from the origin.  The word is always recorded so
every map can be replayed generator by generator in any dimension.

A map may be tagged with the kind of its source and target domain
(``"ball"`` or ``"half"``).  For tagged maps the boundary distance of an
image point is computed from the derivative, using that the map is an
isometry of the hyperbolic densities ``2/(1-|x|^2)`` and ``1/x_n``; this
avoids the cancellation in ``1 - |f(x)|`` when ``f(x)`` is near the sphere.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainViolation, ParameterError, PoleError
from .geom import (
    INF,
    POLE_EPS,
    HyperplaneReflection,
    OrthogonalMap,
    SphereInversion,
    _rotation2,
    apply_generator,
    as_complex,
    as_vector,
    conjugate_point,
    norm,
)

KINDS = ("ball", "half", None)


def _coeff_word(a, b, c, d):
    """Generators realising ``(a z + b)/(c z + d)``, applied left to right."""
    det = a * d - b * c
    if det == 0:
        raise ParameterError("degenerate coefficients (ad - bc = 0)")

    def translate(v):
        v = complex(v)
        if v == 0:
            return []
        nv = np.array([v.real, v.imag])
        return [HyperplaneReflection(nv, 0.0), HyperplaneReflection(nv, abs(v) ** 2 / 2)]

    def scale_rotate(m):
        m = complex(m)
        out = []
        if abs(m) != 1.0:
            out += [SphereInversion(np.zeros(2), 1.0), SphereInversion(np.zeros(2), np.sqrt(abs(m)))]
        ang = cmath.phase(m)
        if ang != 0.0:
            out.append(OrthogonalMap(_rotation2(ang)))
        return out

    if c == 0:
        return scale_rotate(a / d) + translate(b / d)
    k = -det / c**2
    recip = [SphereInversion(np.zeros(2), 1.0), HyperplaneReflection(np.array([0.0, 1.0]), 0.0)]
    return translate(d / c) + recip + scale_rotate(k) + translate(a / c)


def _density(kind, x):
    if kind == "ball":
        s = norm(x)
        return 2.0 / ((1 - s) * (1 + s))
    if kind == "half":
        return 1.0 / x[..., -1]
    raise ParameterError("density needs a ball or half-space source")


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    word: tuple
    dim: int
    coeffs: tuple | None = None
    source: str | None = None
    target: str | None = None
    name: str = "moebius"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        for g in self.word:
            if g.dim != self.dim:
                raise ParameterError("generator dimension does not match the map")
        if self.coeffs is not None:
            if self.dim != 2:
                raise ParameterError("coefficient form is planar only")
            object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.source not in KINDS or self.target not in KINDS:
            raise ParameterError("domain tags must be 'ball', 'half' or None")

    @property
    def is_identity(self) -> bool:
        return len(self.word) == 0

    # evaluation ---------------------------------------------------------

    def apply(self, x):
        """Image of one extended point (``INF`` allowed in and out)."""
        if self.coeffs is not None:
            a, b, c, d = self.coeffs
            if x is INF:
                return INF if c == 0 else as_vector(a / c)
            z = as_complex(as_vector(x, 2))
            den = c * z + d
            if abs(den) <= POLE_EPS * max(abs(c), abs(d)):
                return INF
            return as_vector((a * z + b) / den)
        p = x
        for g in self.word:
            p = apply_generator(g, p)
        return p

    def points(self, x):
        """Images of a stack of finite points; poles raise :class:`PoleError`."""
        x = as_vector(x, self.dim)
        if self.coeffs is not None:
            a, b, c, d = self.coeffs
            z = as_complex(x)
            den = c * z + d
            if np.any(np.abs(den) <= POLE_EPS * max(abs(c), abs(d))):
                raise PoleError(f"{self.name} evaluated at its pole")
            return as_vector((a * z + b) / den)
        p = x
        for g in self.word:
            if isinstance(g, SphereInversion) and np.any(norm(p - g.center) <= POLE_EPS):
                raise PoleError(f"{self.name} evaluated at a pole")
            p = g.map_points(p)
        return p

    __call__ = points

    def dilation(self, x):
        """Linear dilation ``|f'(x)|`` (a conformal map scales all directions equally)."""
        x = as_vector(x, self.dim)
        if self.coeffs is not None:
            a, b, c, d = self.coeffs
            z = as_complex(x)
            return abs(a * d - b * c) / np.abs(c * z + d) ** 2
        out = np.ones(x.shape[:-1])
        p = x
        for g in self.word:
            out = out * g.dilation(p)
            p = g.map_points(p)
        return out

    def image_distance(self, x, y):
        """``|f(x) - f(y)|`` without forming the difference of images."""
        x = as_vector(x, self.dim)
        y = as_vector(y, self.dim)
        if self.coeffs is not None:
            a, b, c, d = self.coeffs
            zx, zy = as_complex(x), as_complex(y)
            dx, dy = c * zx + d, c * zy + d
            scale = max(abs(c), abs(d))
            if np.any(np.abs(dx) <= POLE_EPS * scale) or np.any(np.abs(dy) <= POLE_EPS * scale):
                raise PoleError(f"{self.name} evaluated at its pole")
            return abs(a * d - b * c) * np.abs(zx - zy) / (np.abs(dx) * np.abs(dy))
        dist = norm(x - y)
        p, q = x, y
        for g in self.word:
            if isinstance(g, SphereInversion):
                rp, rq = norm(p - g.center), norm(q - g.center)
                if np.any(rp <= POLE_EPS) or np.any(rq <= POLE_EPS):
                    raise PoleError(f"{self.name} evaluated at a pole")
                dist = g.radius**2 * dist / (rp * rq)
            p, q = g.map_points(p), g.map_points(q)
        return dist

    def target_boundary_distance(self, x):
        """Distance from ``f(x)`` to the boundary of the tagged target domain."""
        x = as_vector(x, self.dim)
        if self.is_identity:
            w = x
            if self.target == "ball":
                return 1.0 - norm(w)
            return w[..., -1]
        if self.source is None or self.target is None:
            raise ParameterError(f"{self.name} carries no domain tags")
        scaled = self.dilation(x) / _density(self.source, x)
        if self.target == "half":
            return scaled
        w = self.points(x)
        return 2.0 * scaled / (1.0 + norm(w))

    # algebra ------------------------------------------------------------

    def inverse(self) -> "MoebiusMap":
        word = tuple(g.inverse() for g in reversed(self.word))
        coeffs = None
        if self.coeffs is not None:
            a, b, c, d = self.coeffs
            coeffs = (d, -b, -c, a)
        return MoebiusMap(word, self.dim, coeffs, self.target, self.source,
                          self.name + "^-1", dict(self.params, inverted=True))

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """The map ``x -> self(other(x))``."""
        if other.dim != self.dim:
            raise ParameterError("cannot compose maps of different dimensions")
        coeffs = None
        if self.coeffs is not None and other.coeffs is not None:
            m = np.array(self.coeffs).reshape(2, 2) @ np.array(other.coeffs).reshape(2, 2)
            coeffs = tuple(m.ravel())
        return MoebiusMap(other.word + self.word, self.dim, coeffs, other.source, self.target,
                          f"{self.name}*{other.name}")


def identity(n: int = 2, kind: str | None = None) -> MoebiusMap:
    coeffs = (1, 0, 0, 1) if n == 2 else None
    return MoebiusMap((), n, coeffs, kind, kind, "identity", {"kind": kind})


def from_coefficients(a, b, c, d, source=None, target=None, name="moebius") -> MoebiusMap:
    """Planar map ``(a z + b)/(c z + d)`` with its generator word."""
    word = _coeff_word(complex(a), complex(b), complex(c), complex(d))
    return MoebiusMap(tuple(word), 2, (a, b, c, d), source, target, name)


def sigma_a(a) -> MoebiusMap:
    """Inversion in the sphere orthogonal to the unit sphere that swaps ``a`` and 0."""
    a = as_vector(a)
    s = float(np.dot(a, a))
    if s == 0.0:
        raise ParameterError("sigma_a needs a != 0; use identity()")
    if s >= 1.0:
        raise ParameterError("sigma_a needs |a| < 1")
    g = SphereInversion(conjugate_point(a), np.sqrt(1.0 / s - 1.0))
    return MoebiusMap((g,), a.shape[0], None, "ball", "ball", "sigma_a", {"a": a})


def ball_automorphism(a, A=None) -> MoebiusMap:
    """``x -> sigma_a(x) @ A``; maps the unit ball onto itself and ``a`` to 0."""
    a = as_vector(a)
    n = a.shape[0]
    if norm(a) >= 1.0:
        raise ParameterError("ball automorphism needs |a| < 1")
    word = [] if not np.any(a) else list(sigma_a(a).word)
    if A is not None:
        A = A if isinstance(A, OrthogonalMap) else OrthogonalMap(A)
        if A.dim != n:
            raise ParameterError("orthogonal map dimension mismatch")
        if not np.allclose(A.matrix, np.eye(n), rtol=0, atol=0):
            word.append(A)
    return MoebiusMap(tuple(word), n, None, "ball", "ball", "ball_automorphism", {"a": a})


def cayley_h_to_b() -> MoebiusMap:
    """``z -> (z - i)/(z + i)``, upper half-plane onto the unit disk."""
    return from_coefficients(1, -1j, 1, 1j, "half", "ball", "cayley_h2b")


def cayley_b_to_h() -> MoebiusMap:
    """``z -> i (1 + z)/(1 - z)``, unit disk onto the upper half-plane."""
    return from_coefficients(1j, 1j, -1, 1, "ball", "half", "cayley_b2h")


def halfplane_to_disk(a: complex, alpha: float = 0.0) -> MoebiusMap:
    """``z -> e^{i alpha} (z - a)/(z - conj(a))`` for ``Im a > 0``."""
    a = complex(a)
    if not a.imag > 0:
        raise ParameterError("halfplane_to_disk needs Im a > 0")
    e = cmath.exp(1j * alpha)
    m = from_coefficients(e, -e * a, 1, -a.conjugate(), "half", "ball", "halfplane_to_disk")
    m.params.update(a=a, alpha=alpha)
    return m


def halfspace_inversion(a, r: float) -> MoebiusMap:
    """Inversion in a sphere centred on the boundary of the upper half-space."""
    a = as_vector(a)
    if a[-1] != 0.0:
        raise ParameterError("inversion center must lie on the boundary hyperplane")
    g = SphereInversion(a, r)
    return MoebiusMap((g,), a.shape[0], None, "half", "half", "halfspace_inversion",
                      {"a": a, "r": float(r)})


def disk_automorphism(a: complex) -> MoebiusMap:
    """``z -> (z - a)/(1 - conj(a) z)``, the disk automorphism sending ``a`` to 0."""
    a = complex(a)
    if abs(a) >= 1:
        raise ParameterError("disk automorphism needs |a| < 1")
    m = from_coefficients(1, -a, -a.conjugate(), 1, "ball", "ball", "disk_automorphism")
    m.params.update(a=a)
    return m


def check_maps_into(m: MoebiusMap, G_src, G_dst, samples) -> None:
    """Raise if any sampled source point lands outside the target domain."""
    x = as_vector(samples, m.dim)
    if not np.all(G_src.contains(x)):
        raise DomainViolation("samples must lie in the source domain")
    w = m.points(x)
    if not np.all(G_dst.contains(w)):
        raise DomainViolation(f"{m.name} maps sample points outside {G_dst.spec()}")


# identities used when estimating the distortion of sigma_a

def ball_identity_sides(a, b):
    """Both sides of ``|a|^2 |b - a*|^2 - |b - a|^2 = (1 - |a|^2)(1 - |b|^2)``."""
    a = as_vector(a)
    b = as_vector(b)
    na2 = np.sum(a * a, -1)
    astar = a / na2[..., None]
    lhs = na2 * np.sum((b - astar) ** 2, -1) - np.sum((b - a) ** 2, -1)
    rhs = (1 - na2) * (1 - np.sum(b * b, -1))
    scale = np.maximum(1.0, np.maximum(na2 * np.sum((b - astar) ** 2, -1), np.sum((b - a) ** 2, -1)))
    return lhs, rhs, scale


def chordal_quotient_bounds(a, b):
    """``(lower, q, upper)`` with ``q = |b - a| / (|a| |b - a*|)`` and its radial bounds."""
    a = as_vector(a)
    b = as_vector(b)
    na, nb = norm(a), norm(b)
    astar = a / (na * na)[..., None]
    q = norm(b - a) / (na * norm(b - astar))
    return np.abs(nb - na) / (1 - na * nb), q, (nb + na) / (1 + na * nb)


def sigma_boundary_gap(a, x):
    """``1 - |sigma_a(x)|`` directly and via ``(|a||x-a*| - |x-a|)/(|a||x-a*|)``."""
    a = as_vector(a)
    x = as_vector(x)
    direct = 1.0 - norm(sigma_a(a).points(x))
    na = norm(a)
    astar = a / (na * na)
    t = na * norm(x - astar)
    return direct, (t - norm(x - a)) / t
