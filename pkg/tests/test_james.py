"""James-like norm over the base space: grouped interval sums."""
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from rhonorm.norms.functionals import evaluate
from rhonorm.norms.james import james_norm, james_norm_witness, run_systems
from rhonorm.norms.tsirelson import tsirelson_norm
from rhonorm.ordinals import from_int
from rhonorm.vectors import Vec00

from conftest import vec


def test_hand_fixtures(sched_23):
    assert james_norm(vec((1, 1)), sched_23) == 1
    assert james_norm(vec((1, 1), (2, -1)), sched_23) == 1
    assert james_norm(vec((1, 1), (2, 1)), sched_23) == 2


def test_alternating_collapses(sched_23):
    # sign changes kill interval sums: far below the l1 mass of 8
    alt = vec(*[(i, (-1) ** i) for i in range(8)])
    assert james_norm(alt, sched_23) == 2


small_vec = st.dictionaries(st.integers(0, 10),
                            st.sampled_from([Fraction(1), Fraction(-1),
                                             Fraction(2), Fraction(-2)]),
                            min_size=1, max_size=5)


def _mk(d):
    return Vec00.make([(from_int(i), q) for i, q in d.items()])


@settings(deadline=None)
@given(small_vec)
def test_summing_lower_bound(sched_23, d):
    x = _mk(d)
    total = sum((q for _, q in x.entries), Fraction(0))
    assert james_norm(x, sched_23) >= abs(total)


@settings(deadline=None)
@given(small_vec)
def test_dominates_base_norm(sched_23, d):
    # the singleton system reproduces the base norm, so J >= T
    x = _mk(d)
    assert james_norm(x, sched_23) >= tsirelson_norm(x, sched_23)


@settings(deadline=None, max_examples=40)
@given(small_vec)
def test_witness_consistent(sched_23, d):
    x = _mk(d)
    value, hulls, collapsed, tree = james_norm_witness(x, sched_23)
    assert value == james_norm(x, sched_23)
    assert len(hulls) == len(collapsed.entries)
    # each group hull really covers a run summing to the collapsed coeff
    for (lo, hi), (_, q) in zip(hulls, collapsed.entries):
        run = x.restrict(lo, hi)
        assert sum((v for _, v in run.entries), Fraction(0)) == q
    if tree is not None:
        assert evaluate(tree, collapsed) == value


def test_run_systems_are_ordered_intervals():
    systems = list(run_systems(3))
    assert len(systems) == len(set(systems))
    for system in systems:
        prev_hi = -1
        for lo, hi in system:
            assert 0 <= lo <= hi <= 2
            assert lo > prev_hi
            prev_hi = hi


def test_zero_sum_blocks_equivalent_to_base_basis(sched_23):
    # zero-sum blocks with c <= J(y_n) <= C behave like the *base* basis:
    # c * T(sum a_n e_n) <= J(sum a_n y_n) <= 2C * T(sum a_n e_n)
    # (the unconditional constant of the base is 1)
    y1 = vec((0, 1), (1, -1))
    y2 = vec((2, 1), (4, -1))
    y3 = vec((5, 2), (6, -2))
    ys = [y1, y2, y3]
    c = min(james_norm(y, sched_23) for y in ys)
    big = max(james_norm(y, sched_23) for y in ys)
    for coeffs in [(1, 1, 1), (1, -1, 1), (2, 1, -1)]:
        mix = Vec00.make([])
        for a, y in zip(coeffs, ys):
            mix = mix + y.scale(Fraction(a))
        basis_side = vec(*[(i, a) for i, a in enumerate(coeffs)])
        ref = tsirelson_norm(basis_side, sched_23)
        assert c * ref <= james_norm(mix, sched_23) <= 2 * big * ref
