"""Parsing of compact domain and map specifications used on the command line.

Domains: ``ball2``, ``half3``, ``sector:phi=pi/4``, ``ball2:puncture=0,0``
(repeat ``puncture=`` for several punctures).

Maps: ``identity:ball2``, ``sigma:a=0.5,0``, ``ballaut:a=0.3,0.4:angle=0.5``,
``cayley:h2b``, ``cayley:b2h``, ``h2d:a=0,2:alpha=0.3``, ``hsinv:a=0,0:r=1``,
``power:k=3``, ``poly:c=0,0,1``, ``series:c=0,0.5,0.5``, ``expexample``,
``conj34:a=0.5,0``.  Fields after the name are separated by ``:``.
"""
from __future__ import annotations

import math
import re

import numpy as np

from . import distortion as ds
from .domains import HalfSpace, PuncturedHalfSpace, PuncturedUnitBall, Sector, UnitBall
from .errors import ParameterError
from .holomorphic import ExpExample, Polynomial, PowerMap, PowerSeries
from .geom import _rotation2


class SpecError(ParameterError):
    """Malformed or unknown specification string."""


def _fields(text: str):
    head, *rest = text.strip().split(":")
    pairs = []
    for item in rest:
        if "=" in item:
            k, v = item.split("=", 1)
            pairs.append((k.strip(), v.strip()))
        else:
            pairs.append((item.strip(), None))
    return head.strip(), pairs


def parse_number(text: str) -> float:
    """A float, optionally written as ``pi``, ``pi/4``, ``3pi/4`` or ``2*pi/3``."""
    t = text.replace(" ", "").replace("*", "")
    m = re.fullmatch(r"([0-9.eE+-]*)pi(?:/([0-9.eE+-]+))?", t)
    try:
        if m:
            num = float(m.group(1)) if m.group(1) not in ("", "+", "-") else float(m.group(1) + "1")
            return num * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        return float(t)
    except ValueError:
        raise SpecError(f"not a number: {text!r}") from None


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise SpecError(f"not a comma-separated vector: {text!r}") from None


def parse_complex_list(text: str) -> tuple:
    try:
        return tuple(complex(v.replace(" ", "")) for v in text.split(","))
    except ValueError:
        raise SpecError(f"not a comma-separated list of complex numbers: {text!r}") from None


def _point_as_complex(text: str) -> complex:
    v = parse_vector(text)
    if v.size != 2:
        raise SpecError(f"expected a planar point x,y: {text!r}")
    return complex(v[0], v[1])


def parse_domain(text: str):
    head, fields = _fields(text)
    m = re.fullmatch(r"(ball|half)(\d+)", head)
    try:
        if m:
            n = int(m.group(2))
            base = UnitBall(n) if m.group(1) == "ball" else HalfSpace(n)
            punct = []
            for k, v in fields:
                if k != "puncture" or v is None:
                    raise SpecError(f"unknown domain field {k!r}")
                punct.append(tuple(parse_vector(v)))
            if not punct:
                return base
            cls = PuncturedUnitBall if m.group(1) == "ball" else PuncturedHalfSpace
            return cls(n, tuple(punct))
        if head == "sector":
            opts = dict(fields)
            if set(opts) != {"phi"} or opts["phi"] is None:
                raise SpecError("sector needs exactly one field phi=<angle>")
            return Sector(parse_number(opts["phi"]))
    except SpecError:
        raise
    except ParameterError as e:
        raise SpecError(str(e)) from None
    raise SpecError(f"unknown domain {text!r}")


def _opts(fields, allowed, required=()):
    opts = {}
    for k, v in fields:
        if k not in allowed or v is None:
            raise SpecError(f"unknown or empty field {k!r}")
        opts[k] = v
    missing = [k for k in required if k not in opts]
    if missing:
        raise SpecError(f"missing field(s): {', '.join(missing)}")
    return opts


def parse_map(text: str) -> ds.MapUnderTest:
    """Build the :class:`~jlip.distortion.MapUnderTest` named by ``text``."""
    head, fields = _fields(text)
    try:
        if head == "identity":
            if len(fields) != 1 or fields[0][1] is not None:
                raise SpecError("identity needs a domain, e.g. identity:ball2")
            return ds.identity_mut(parse_domain(fields[0][0]))
        if head == "sigma":
            o = _opts(fields, {"a"}, ("a",))
            return ds.sigma_mut(parse_vector(o["a"]))
        if head == "ballaut":
            o = _opts(fields, {"a", "angle"}, ("a",))
            a = parse_vector(o["a"])
            A = None
            if "angle" in o:
                if a.size != 2:
                    raise SpecError("angle= is only defined for planar automorphisms")
                A = _rotation2(parse_number(o["angle"]))
            return ds.ball_automorphism_mut(a, A)
        if head == "cayley":
            if fields == [("h2b", None)]:
                return ds.cayley_h2b_mut()
            if fields == [("b2h", None)]:
                return ds.cayley_b2h_mut()
            raise SpecError("cayley needs h2b or b2h")
        if head == "h2d":
            o = _opts(fields, {"a", "alpha"}, ("a",))
            return ds.halfplane_to_disk_mut(_point_as_complex(o["a"]),
                                            parse_number(o.get("alpha", "0")))
        if head == "hsinv":
            o = _opts(fields, {"a", "r"}, ("a", "r"))
            return ds.halfspace_inversion_mut(parse_vector(o["a"]), parse_number(o["r"]))
        if head == "power":
            o = _opts(fields, {"k"}, ("k",))
            k = parse_number(o["k"])
            if k != int(k):
                raise SpecError("power exponent must be an integer")
            return ds.holomorphic_mut(PowerMap(int(k)))
        if head == "poly":
            o = _opts(fields, {"c"}, ("c",))
            return ds.holomorphic_mut(Polynomial(parse_complex_list(o["c"])))
        if head == "series":
            o = _opts(fields, {"c"}, ("c",))
            return ds.holomorphic_mut(PowerSeries(parse_complex_list(o["c"])))
        if head == "expexample":
            _opts(fields, set())
            return ds.holomorphic_mut(ExpExample())
        if head == "conj34":
            o = _opts(fields, {"a"}, ("a",))
            return ds.conj34_map(_point_as_complex(o["a"]))
    except SpecError:
        raise
    except ParameterError as e:
        raise SpecError(str(e)) from None
    raise SpecError(f"unknown map {text!r}")
