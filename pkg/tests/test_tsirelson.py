"""Mixed Tsirelson norm: frozen values, symmetries, witnesses, oracles.

The DP computes the implicit-equation norm over interval decompositions;
norming_profiles/norming_enumerate independently generate the functional
family, so equality between the two routes is the correctness argument
for the interval reduction.
"""
from fractions import Fraction
from itertools import combinations, product

from hypothesis import given, settings
from hypothesis import strategies as st

from rhonorm.norms.functionals import evaluate, render_functional
from rhonorm.norms.tsirelson import (aux_w_norm, norming_enumerate, oracle_norm,
                                     tsirelson_norm, tsirelson_norm_witness)
from rhonorm.ordinals import from_int, parse
from rhonorm.vectors import Vec00, basis_vector

from conftest import vec


def test_frozen_values(sched_23):
    assert tsirelson_norm(vec((0, 1)), sched_23) == 1
    assert tsirelson_norm(vec((0, 1), (5, 1), (9, 1)), sched_23) == Fraction(3, 2)
    nine = vec(*[(i, 1) for i in range(1, 10)])
    assert tsirelson_norm(nine, sched_23) == Fraction(9, 4)
    alt = vec((0, 1), (1, -1), (2, 1), (3, -1))
    assert tsirelson_norm(alt, sched_23) == Fraction(3, 2)


def test_aux_w_frozen(sched_23):
    # W admits arity 4*n_j, so wider splits pay off earlier than in T
    assert aux_w_norm(vec((0, 1), (5, 1), (9, 1)), sched_23) == Fraction(3, 2)
    nine = vec(*[(i, 1) for i in range(1, 10)])
    assert aux_w_norm(nine, sched_23) == Fraction(9, 2)
    alt = vec((0, 1), (1, -1), (2, 1), (3, -1))
    assert aux_w_norm(alt, sched_23) == 2


small_vec = st.dictionaries(st.integers(0, 12),
                            st.sampled_from([Fraction(1), Fraction(-1),
                                             Fraction(1, 2), Fraction(2)]),
                            min_size=1, max_size=5)


def _mk(d):
    return Vec00.make([(from_int(i), q) for i, q in d.items()])


@settings(deadline=None)
@given(small_vec)
def test_w_dominates_t(sched_23, d):
    x = _mk(d)
    assert aux_w_norm(x, sched_23) >= tsirelson_norm(x, sched_23)


@settings(deadline=None)
@given(small_vec)
def test_max_coeff_lower_bound(sched_23, d):
    x = _mk(d)
    assert tsirelson_norm(x, sched_23) >= max(abs(q) for _, q in x.entries)
    assert tsirelson_norm(x, sched_23) <= x.l1_norm()


@settings(deadline=None)
@given(small_vec)
def test_homogeneous_and_flip(sched_23, d):
    x = _mk(d)
    assert tsirelson_norm(x.scale(Fraction(3)), sched_23) \
        == 3 * tsirelson_norm(x, sched_23)
    flipped = Vec00(tuple((i, -q) for i, q in x.entries))
    assert tsirelson_norm(flipped, sched_23) == tsirelson_norm(x, sched_23)


@settings(deadline=None, max_examples=40)
@given(small_vec, small_vec)
def test_triangle(sched_245, d1, d2):
    x, y = _mk(d1), _mk(d2)
    assert tsirelson_norm(x + y, sched_245) \
        <= tsirelson_norm(x, sched_245) + tsirelson_norm(y, sched_245)


@settings(deadline=None)
@given(small_vec)
def test_witness_attains_value(sched_245, d):
    x = _mk(d)
    value, tree = tsirelson_norm_witness(x, sched_245)
    assert value == tsirelson_norm(x, sched_245)
    assert evaluate(tree, x) == value


def test_oracle_agrees_on_small_supports(sched_245):
    # The acceptance suite runs the full sweep; this is the smoke version.
    grid = [parse(t) for t in ("0", "w", "w*2+1")]
    for k in (1, 2, 3):
        for supp in combinations(grid, k):
            for coeffs in product((Fraction(1), Fraction(-1, 2)), repeat=k):
                x = Vec00.make(list(zip(supp, coeffs)))
                assert oracle_norm(x, sched_245, k) == tsirelson_norm(x, sched_245)


def test_enumerate_respects_budget(sched_245):
    supp = tuple(from_int(i) for i in range(3))
    full = list(norming_enumerate(supp, sched_245, 2, budget=10 ** 6))
    capped = list(norming_enumerate(supp, sched_245, 2, budget=5))
    assert len(capped) == 5
    assert ([render_functional(f) for f in full[:5]]
            == [render_functional(f) for f in capped])
    x = basis_vector(from_int(1))
    assert max(abs(evaluate(f, x)) for f in full) == 1
