"""Weight/arity schedules: the canonical growth recursion and the parser."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhonorm.norms.schedules import (ScheduleError, parse_schedule,
                                     schedule_paper)


def test_paper_two_slots_exact():
    s = schedule_paper(2)
    assert s.m == (2, 16)
    assert s.n == (4, 2 ** 48)
    assert s.paper_exact


@settings(deadline=None)
@given(st.integers(1, 4))
def test_paper_recursion(k):
    s = schedule_paper(k)
    for j in range(1, k):
        assert s.m[j] == s.m[j - 1] ** 4
        # s_j = log2 of m_{j+1}^3, and every m is a power of two
        assert s.n[j] == (4 * s.n[j - 1]) ** (3 * (s.m[j].bit_length() - 1))


def test_slot_indexing_is_one_based():
    s = parse_schedule("m=2,4;n=3,5")
    assert (s.weight(1), s.arity(1)) == (2, 3)
    assert (s.weight(2), s.arity(2)) == (4, 5)
    assert len(s) == 2
    with pytest.raises(ScheduleError):
        s.weight(0)
    with pytest.raises(ScheduleError):
        s.arity(3)


def test_parse_forms_agree():
    inline = parse_schedule("m=2,4;n=3,5")
    filey = parse_schedule("# toy\nm = 2, 4\nn = 3, 5\n")
    assert (inline.m, inline.n) == (filey.m, filey.n)
    assert parse_schedule("paper:2").m == (2, 16)


@pytest.mark.parametrize("text", [
    "m=2;n=",
    "m=2",
    "paper:zero",
    "m=2,4;n=3",       # lengths must match
    "m=1;n=3",         # weights start at 2
    "nonsense",
])
def test_parse_rejects(text):
    with pytest.raises(ScheduleError):
        parse_schedule(text)


def test_even_odd_split():
    s = parse_schedule("m=2,3,4,6;n=2,3,5,6")
    assert list(s.even_slots()) == [2, 4]
    assert list(s.odd_slots()) == [1, 3]
    sub = s.even_subschedule()
    assert sub.m == (3, 6)
    assert sub.n == (3, 6)
