"""The sigma registry: injective coding of Q_s tuples into odd-indexed slots."""
from fractions import Fraction

import pytest

from rhonorm.norms.functionals import FCombine, FLeaf
from rhonorm.norms.schedules import parse_schedule
from rhonorm.ordinals import from_int
from rhonorm.rho import build_ladder_rho, p_of
from rhonorm.space import (CodingError, CodingState, QsEntry, ScheduleExhausted,
                           qs_problems, qs_project, sigma_rho)
from rhonorm.ordinals import parse


@pytest.fixture()
def rho():
    return build_ladder_rho(parse("w*4"))


def flat(slot, sched, pts):
    return FCombine(slot, sched.weight(slot),
                    tuple(FLeaf(1, from_int(p)) for p in pts))


@pytest.fixture()
def sched():
    return parse_schedule("m=2,3,4,6,7,8,9,10,11,12;n=2,3,5,6,7,8,9,10,11,12")


def entry(sched, slot, pts, p):
    return QsEntry(flat(slot, sched, pts), sched.weight(slot), p)


def test_codes_step_by_four(sched, rho):
    coding = CodingState("toy", max_slot=len(sched.m))
    e1 = entry(sched, 4, (0, 1, 2), 3)
    e2 = entry(sched, 4, (3, 4, 5), 3)
    c1 = sigma_rho([e1], coding, rho)
    c2 = sigma_rho([e1, e2], coding, rho)
    assert c1 == 2
    assert c2 == 6
    # replay returns the recorded codes, in any order
    assert sigma_rho([e1, e2], coding, rho) == 6
    assert sigma_rho([e1], coding, rho) == 2


def test_codes_depend_on_content(sched, rho):
    coding = CodingState("toy", max_slot=len(sched.m))
    a = sigma_rho([entry(sched, 4, (0, 1, 2), 3)], coding, rho)
    b = sigma_rho([entry(sched, 4, (0, 1, 3), 3)], coding, rho)
    c = sigma_rho([entry(sched, 2, (0, 1), 3)], coding, rho)
    assert len({a, b, c}) == 3
    assert all(code % 4 == 2 for code in (a, b, c))


def test_transport_collapses_position(sched, rho):
    """Order-isomorphic pictures share a code: the key is built over the
    collapsed closure, so absolute positions wash out."""
    c1 = CodingState("toy", max_slot=len(sched.m))
    c2 = CodingState("toy", max_slot=len(sched.m))
    lo = sigma_rho([entry(sched, 4, (0, 1, 2), 1)], c1, rho)
    hi = sigma_rho([entry(sched, 4, (10, 11, 12), 1)], c2, rho)
    assert lo == hi


def test_exhaustion_raises(sched, rho):
    coding = CodingState("toy", max_slot=6)
    es = []
    for k in range(3):
        es.append(entry(sched, 4, (3 * k, 3 * k + 1, 3 * k + 2), 3))
        code = None
        try:
            code = sigma_rho(list(es), coding, rho)
        except ScheduleExhausted:
            assert k == 2  # codes 2, 6 fit below slot 6; 10 does not
            break
        assert code in (2, 6)
    else:
        pytest.fail("third fresh tuple should exhaust the schedule")


def test_strict_mode_enforces_shape_and_growth(sched, rho):
    strict = CodingState("strict", max_slot=len(sched.m))
    with pytest.raises(CodingError):  # weight disagrees with the slot table
        sigma_rho([QsEntry(flat(4, sched, (0, 1, 2)), 99, 3)], strict, rho)
    # strict skips codes at or below the growth floor (1/eps^2 = 9 here)
    flat_entry = entry(sched, 2, (0, 1, 2), 1)
    assert sigma_rho([flat_entry], strict, rho) == 10
    # toy hands out the next free code regardless, but says so
    toy = CodingState("toy", max_slot=len(sched.m))
    assert sigma_rho([flat_entry], toy, rho) == 2
    assert any(w.code == "sigma-growth" for w in toy.waivers)


def test_qs_problems_reports_shape(sched, rho):
    good = [entry(sched, 4, (0, 1, 2), 3),
            entry(sched, 2, (3, 4), 4)]
    bad_weight = [QsEntry(flat(4, sched, (0, 1, 2)), 99, 3)]
    assert qs_problems(bad_weight, rho)
    non_successive = [entry(sched, 4, (0, 1, 5), 3),
                      entry(sched, 2, (4, 6), 4)]
    assert qs_problems(non_successive, rho)
    assert not [p for p in qs_problems(good, rho) if "successive" in p]


def test_fork_shares_root_and_prefix(sched, rho):
    coding = CodingState("toy", max_slot=len(sched.m))
    e1 = entry(sched, 4, (0, 1, 2), 3)
    base_code = sigma_rho([e1], coding, rho)
    fork = coding.fork("adversary")
    assert fork.root_id == coding.root_id
    assert sigma_rho([e1], fork, rho) == base_code
    # fresh assignments diverge after the fork without touching the parent
    e2 = entry(sched, 4, (3, 4, 5), 3)
    fork_code = sigma_rho([e2], fork, rho)
    assert fork_code == 6
    assert sigma_rho([e2], coding, rho) == 6
