"""Cantor-normal-form arithmetic, the text grammar, and the sample grids."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhonorm.ordinals import (OMEGA, ONE, ZERO, OrdinalParseError, compare,
                              from_int, ladder_entry, ladder_next, omega_power,
                              omega_times, order_iso, parse, render)
from rhonorm.rho import ordinal_grid

from conftest import ordinals


def test_literals():
    assert parse("0") == ZERO
    assert parse("7") == from_int(7)
    assert parse("w") == OMEGA
    assert parse("w*3+2") == omega_times(3, 2)
    assert parse("w^2*3+w*2+1") > parse("w^2*3+w*2")
    assert render(parse("w^w")) == "w^w"


@given(ordinals())
def test_render_parse_round_trip(a):
    assert parse(render(a)) == a


@given(ordinals(), ordinals(), ordinals())
def test_addition_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(ordinals(), ordinals())
def test_addition_monotone_right(a, b):
    assert a + b >= a
    if not b.is_zero():
        assert a + b > a


def test_left_absorption():
    assert ONE + OMEGA == OMEGA
    assert OMEGA + omega_power(from_int(2)) == omega_power(from_int(2))
    assert parse("w*3") + parse("w^2") == parse("w^2")
    # but not the other way round
    assert parse("w^2") + parse("w*3") == parse("w^2+w*3")


@given(ordinals(), ordinals())
def test_order_trichotomy(a, b):
    assert (a < b) + (a == b) + (a > b) == 1
    assert compare(a, b) == (0 if a == b else (-1 if a < b else 1))


@given(ordinals())
def test_succ_and_classification(a):
    s = a.succ()
    assert s > a
    assert s.is_successor()
    assert a.is_limit() != a.is_successor()  # zero counts as a limit here


def test_limit_pred():
    assert parse("w*2").limit_pred() == OMEGA
    assert parse("w^2+w").limit_pred() == parse("w^2")
    with pytest.raises(ValueError):
        ZERO.limit_pred()
    with pytest.raises(ValueError):
        from_int(3).limit_pred()
    with pytest.raises(ValueError):
        parse("w^2").limit_pred()  # a limit of limits, not beta + w


@pytest.mark.parametrize("text,offset", [
    ("", 0),
    ("w^", 2),
    ("2+", 2),
    ("w*x", 2),
    ("w+*2", 2),
])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(OrdinalParseError) as err:
        parse(text)
    assert err.value.offset == offset


def test_ladder_walks_into_limit():
    # entries of the canonical ladder at w^2 climb through w*(i+1)
    steps = [ladder_entry(parse("w^2"), i) for i in range(1, 4)]
    assert steps == [parse("w*2"), parse("w*3"), parse("w*4")]
    i, nxt = ladder_next(parse("w^2"), parse("w*2+5"))
    assert nxt > parse("w*2+5") and nxt < parse("w^2")
    assert ladder_entry(parse("w^2"), i) == nxt


def test_order_iso_maps_by_rank():
    f = [parse("1"), parse("w"), parse("w*2+1")]
    g = [parse("3"), parse("5"), parse("w")]
    iso = order_iso(f, g)
    assert [iso[x] for x in f] == g
    with pytest.raises(ValueError):
        order_iso(f, g[:2])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["w*3", "w*5", "w^2", "w^3"]), st.integers(4, 24))
def test_ordinal_grid_shape(bound_text, width):
    bound = parse(bound_text)
    grid = ordinal_grid(bound, width)
    assert all(a < b for a, b in zip(grid, grid[1:]))
    assert all(a < bound for a in grid)
    assert grid == ordinal_grid(bound, width)


def test_ordinal_grid_sizes_frozen():
    assert len(ordinal_grid(parse("w*3"), 12)) == 46
    assert len(ordinal_grid(parse("w*5"), 20)) == 78
