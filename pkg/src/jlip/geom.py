"""Euclidean and extended-space primitives.

Points of R^n are float arrays of shape ``(n,)``; most routines also accept
stacks of points of shape ``(..., n)``.  The point at infinity of the
extended space is the singleton :data:`INF`.  Planar points may be given as
Python complex numbers and are identified with ``(re, im)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ParameterError, PoleError

# Points closer than this to an inversion center are treated as the center.
POLE_EPS = 1e-14
ORTHO_TOL = 1e-12


class _Infinity:
    """The point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtendedPoint = Union[np.ndarray, _Infinity]


def is_infinity(p) -> bool:
    return p is INF


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a float array of points.

    Complex scalars and complex arrays are split into (re, im) pairs.
    """
    if isinstance(x, (complex, np.complexfloating)) or (
        isinstance(x, np.ndarray) and np.iscomplexobj(x)
    ):
        z = np.asarray(x, dtype=complex)
        v = np.stack([z.real, z.imag], axis=-1)
    else:
        v = np.asarray(x, dtype=float)
    if v.ndim == 0 or v.shape[-1] < 2:
        raise ParameterError(f"points need at least 2 coordinates, got shape {v.shape}")
    if dim is not None and v.shape[-1] != dim:
        raise ParameterError(f"expected dimension {dim}, got {v.shape[-1]}")
    if not np.all(np.isfinite(v)):
        raise ParameterError("point coordinates must be finite")
    return v


def as_complex(v) -> complex | np.ndarray:
    """Planar point(s) to complex number(s)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 2:
        raise ParameterError("complex identification is only defined in the plane")
    z = v[..., 0] + 1j * v[..., 1]
    return complex(z) if z.ndim == 0 else z


def norm(x) -> np.ndarray:
    return np.sqrt(np.sum(np.square(x), axis=-1))


def conjugate_point(a) -> ExtendedPoint:
    """Return ``a / |a|^2``, with ``0 -> INF`` and ``INF -> 0``."""
    if a is INF:
        raise ParameterError("dimension of the origin is ambiguous; use np.zeros(n)")
    a = as_vector(a)
    s = float(np.dot(a, a))
    if s == 0.0:
        return INF
    return a / s


def _rotation2(angle: float) -> np.ndarray:
    # row-vector convention: (x, y) @ R rotates counter-clockwise
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True, eq=False)
class HyperplaneReflection:
    """Reflection in the hyperplane ``{x : x.normal = offset}``."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        a = as_vector(self.normal)
        if not np.any(a != 0):
            raise ParameterError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def map_points(self, x):
        a = self.normal
        s = (x @ a - self.offset) / (a @ a)
        return x - 2.0 * s[..., None] * a

    def dilation(self, x):
        return np.ones(np.shape(x)[:-1])

    def inverse(self):
        return self

    def preserves_unit_sphere(self) -> bool:
        return self.offset == 0.0

    def preserves_upper_half(self) -> bool:
        return self.normal[-1] == 0.0


@dataclass(frozen=True, eq=False)
class SphereInversion:
    """Inversion in the sphere ``|x - center| = radius``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_vector(self.center)
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ParameterError("inversion radius must be strictly positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def map_points(self, x):
        """Vectorised inversion; points at the center map to ``inf`` coordinates."""
        d = x - self.center
        s = np.sum(d * d, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.where(s > POLE_EPS**2, self.radius**2 / s, np.inf)
            out = self.center + k[..., None] * d
        return np.where((s > POLE_EPS**2)[..., None], out, np.inf)

    def dilation(self, x):
        s = np.sum((x - self.center) ** 2, axis=-1)
        with np.errstate(divide="ignore"):
            return self.radius**2 / s

    def inverse(self):
        return self


@dataclass(frozen=True, eq=False)
class OrthogonalMap:
    """Linear isometry ``x -> x @ matrix`` (row-vector convention)."""

    matrix: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 2:
            raise ParameterError("orthogonal map needs a square matrix of size >= 2")
        if not np.allclose(A.T @ A, np.eye(A.shape[0]), rtol=0, atol=ORTHO_TOL):
            raise ParameterError("matrix is not orthogonal to 1e-12")
        object.__setattr__(self, "matrix", A)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def map_points(self, x):
        return x @ self.matrix

    def dilation(self, x):
        return np.ones(np.shape(x)[:-1])

    def inverse(self):
        return OrthogonalMap(self.matrix.T)

    def preserves_upper_half(self) -> bool:
        n = self.dim
        e = np.zeros(n)
        e[-1] = 1.0
        return bool(np.allclose(e @ self.matrix, e, rtol=0, atol=ORTHO_TOL))


Generator = Union[HyperplaneReflection, SphereInversion, OrthogonalMap]


def apply_generator(g: Generator, x: ExtendedPoint) -> ExtendedPoint:
    """Apply one generator to a single point of the extended space."""
    if x is INF:
        if isinstance(g, SphereInversion):
            return g.center.copy()
        return INF
    x = as_vector(x, g.dim)
    if x.ndim != 1:
        raise ParameterError("apply_generator takes a single point; use map_points for stacks")
    if isinstance(g, SphereInversion) and norm(x - g.center) <= POLE_EPS:
        return INF
    return g.map_points(x)


def inversion_distance(g: SphereInversion, x, y) -> float:
    """``|g(x) - g(y)|`` from the chordal identity ``r^2 |x-y| / (|x-c||y-c|)``."""
    x = as_vector(x, g.dim)
    y = as_vector(y, g.dim)
    dx = norm(x - g.center)
    dy = norm(y - g.center)
    if np.any(dx <= POLE_EPS) or np.any(dy <= POLE_EPS):
        raise PoleError("inversion distance is undefined at the inversion center")
    return g.radius**2 * norm(x - y) / (dx * dy)


def lipschitz_ratio(d_in: float, d_out: float) -> float:
    """Distortion ``d_out / d_in`` of one pair; the building block of L-lipschitz checks."""
    if not d_in > 0:
        raise ParameterError("input distance must be positive")
    return d_out / d_in
