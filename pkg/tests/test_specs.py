import math

import pytest

from jlip.domains import HalfSpace, PuncturedHalfSpace, PuncturedUnitBall, Sector, UnitBall
from jlip.specs import SpecError, parse_domain, parse_map, parse_number


def test_parse_domain():
    assert parse_domain("ball3") == UnitBall(3)
    assert parse_domain("half2") == HalfSpace(2)
    assert parse_domain("sector:phi=pi/4") == Sector(math.pi / 4)
    assert parse_domain("ball2:puncture=0,0") == PuncturedUnitBall(2, ((0.0, 0.0),))
    P = parse_domain("half2:puncture=0,1:puncture=2,1")
    assert isinstance(P, PuncturedHalfSpace) and len(P.punctures) == 2


@pytest.mark.parametrize("text", ["ball", "disk2", "ball2:x=1", "sector", "sector:phi=abc",
                                  "ball2:puncture=2,0", "half1"])
def test_parse_domain_errors(text):
    with pytest.raises(SpecError):
        parse_domain(text)


def test_parse_number():
    assert parse_number("pi/4") == pytest.approx(math.pi / 4)
    assert parse_number("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_number("2*pi") == pytest.approx(2 * math.pi)
    assert parse_number("0.25") == 0.25


@pytest.mark.parametrize("text,kind", [
    ("identity:ball2", "identity"), ("sigma:a=0.5,0", "sigma_a"),
    ("ballaut:a=0.3,0.4:angle=0.5", "ball_automorphism"), ("cayley:h2b", "cayley_h2b"),
    ("cayley:b2h", "cayley_b2h"), ("h2d:a=0,2:alpha=0.3", "halfplane_to_disk"),
    ("hsinv:a=0,0,0:r=1", "halfspace_inversion"), ("power:k=3", "power"),
    ("poly:c=0,0,1", "poly"), ("series:c=0,0.5j,0.5", "series"), ("expexample", "expexample"),
    ("conj34:a=0.5,0", "conj34"),
])
def test_parse_map(text, kind):
    assert parse_map(text).kind == kind


@pytest.mark.parametrize("text", ["nope", "sigma", "sigma:a=1,0", "power:k=2.5", "cayley:x",
                                  "poly:c=1,1", "conj34:a=0,0", "h2d:a=0,-1", "expexample:k=1"])
def test_parse_map_errors(text):
    with pytest.raises(SpecError):
        parse_map(text)
