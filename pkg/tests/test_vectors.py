"""Finitely supported rational vectors indexed by ordinals."""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhonorm.ordinals import OrdinalParseError, from_int, parse
from rhonorm.vectors import Vec00, parse_rat, parse_vector, render_vector, successive

from conftest import vec


def test_make_normalizes():
    x = Vec00.make([(from_int(3), Fraction(1)), (from_int(1), Fraction(2)),
                    (from_int(3), Fraction(-1)), (from_int(7), Fraction(0))])
    # entries merge, zeros drop, order is by index
    assert x == vec((1, 2))
    assert x.support() == (from_int(1),)


def test_algebra():
    x, y = vec((0, 1), (2, 3)), vec((2, -3), (5, 2))
    assert x + y == vec((0, 1), (5, 2))
    assert x - x == Vec00.make([])
    assert (x - x).is_zero()
    assert x.scale(Fraction(1, 2)) == vec((0, Fraction(1, 2)), (2, Fraction(3, 2)))


coeffs = st.fractions(max_denominator=6).filter(lambda q: q != 0)


@given(st.dictionaries(st.integers(0, 30), coeffs, max_size=6))
def test_round_trip_through_text(d):
    x = Vec00.make([(from_int(i), q) for i, q in d.items()])
    assert parse_vector(render_vector(x)) == x


def test_parse_vector_offsets():
    with pytest.raises(OrdinalParseError) as err:
        parse_vector("0:1,5:oops")
    assert err.value.offset == 6
    with pytest.raises(OrdinalParseError) as err:
        parse_vector("0:1,bad:2")
    assert err.value.offset == 4
    with pytest.raises(OrdinalParseError):
        parse_vector("0")


def test_parse_rat():
    assert parse_rat("3/4") == Fraction(3, 4)
    assert parse_rat("-2") == Fraction(-2)
    with pytest.raises(OrdinalParseError):
        parse_rat("x", 9)


def test_restrict_and_hull():
    x = Vec00.make([(parse("w"), Fraction(1)), (parse("w*2"), Fraction(2)),
                    (from_int(1), Fraction(1))])
    lo, hi = x.range_hull()
    assert (lo, hi) == (from_int(1), parse("w*2"))
    cut = x.restrict(parse("w"), parse("w*2"))  # closed interval
    assert cut.support() == (parse("w"), parse("w*2"))
    assert x.restrict(parse("2"), parse("w+1")).support() == (parse("w"),)


def test_successive():
    a, b = vec((0, 1), (2, 1)), vec((3, 1), (5, 1))
    assert successive(a, b)
    assert not successive(b, a)
    assert not successive(a, vec((2, 1), (9, 1)))
