"""Rho functions: axioms, closure calculus, universality, smoothness."""
import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhonorm.ordinals import OMEGA, from_int, parse, render
from rhonorm.rho import (RhoError, RhoModel, base_positional, build_ladder_rho,
                         build_smooth_rho, build_universal_rho, closure,
                         enumerate_models, is_p_closed, make_twin_base, model_of,
                         models_isomorphic, ordinal_grid, p_of, rho_bar,
                         rho_eval, smoothness_report, universal_extend,
                         verify_rho_axioms)


@pytest.fixture(scope="module")
def ladder():
    return build_ladder_rho(parse("w*6"))


@pytest.fixture(scope="module")
def smooth():
    return build_smooth_rho(parse("w^2*2"))


def test_base_positional_values(ladder):
    # below w the ladder function is the positional base
    assert rho_eval(ladder, from_int(2), from_int(5)) == 5
    assert rho_eval(ladder, from_int(0), from_int(1)) == 1
    with pytest.raises(RhoError):
        rho_eval(ladder, from_int(5), from_int(2))


def test_frozen_closure_example(ladder):
    out = closure(ladder, (from_int(2), from_int(5)), 5)
    assert [render(a) for a in out] == ["0", "1", "2", "3", "4", "5"]
    assert is_p_closed(ladder, out, 5)


def test_p_of_is_max_pair_value(ladder):
    pts = [parse(t) for t in ("1", "w", "w*2+3")]
    assert p_of(ladder, pts) == max(rho_eval(ladder, a, b)
                                    for a, b in combinations(sorted(pts), 2))


def test_axioms_hold_on_sampled_triples(ladder, smooth):
    # the acceptance suite fuzzes 500 triples per rho; smoke a seeded 50 here
    rng = random.Random(7)
    for rho in (ladder, smooth):
        pts = ordinal_grid(rho.bound, 6)
        for _ in range(50):
            triple = sorted(rng.sample(pts, 3))
            rep = verify_rho_axioms(rho, triple)
            assert rep.ok, rep.details["violations"]


sample6 = [parse(t) for t in ("0", "2", "w", "w+1", "w*2", "w*2+4")]


@settings(deadline=None, max_examples=60)
@given(st.sets(st.sampled_from(range(6)), min_size=1), st.integers(0, 3))
def test_closure_monotone_idempotent(ladder, idxs, extra_p):
    f = [sample6[i] for i in idxs]
    p = p_of(ladder, sample6) + extra_p
    cl = closure(ladder, f, p)
    assert set(f) <= set(cl)
    assert closure(ladder, cl, p) == cl           # idempotent
    assert max(cl) == max(f)                      # never grows upward
    assert set(cl) <= set(closure(ladder, sample6, p))  # monotone


def test_cut_and_meet_laws_need_closed_sets(ladder):
    """The cut/meet laws are laws of p-closed sets; unclosed counterexample
    frozen here so the domain restriction stays visible."""
    f = (from_int(0), from_int(5))
    g = (from_int(0), from_int(7))
    p = 7
    clf, clg = closure(ladder, f, p), closure(ladder, g, p)
    assert [int(render(a)) for a in clf] == list(range(6))
    assert [int(render(a)) for a in clg] == list(range(8))
    # raw meet law fails: cl(F & G) is a strict subset of cl F & cl G
    meet = closure(ladder, set(f) & set(g), p)
    assert set(meet) == {from_int(0)}
    assert set(meet) < set(clf) & set(clg)
    # raw cut law fails at alpha = 3 for the same reason
    cut = closure(ladder, [x for x in f if x < from_int(3)], p)
    assert set(cut) == {from_int(0)}
    assert {x for x in clf if x < from_int(3)} != set(cut)
    # on the closures themselves both laws hold
    inter = tuple(sorted(set(clf) & set(clg)))
    assert closure(ladder, inter, p) == inter
    assert inter == clf[:len(inter)] == clg[:len(inter)]
    for a in sample6:
        head = tuple(x for x in clf if x < a)
        assert closure(ladder, head, p) == head if head else True


def test_common_point_law_any_sets(ladder):
    f = [from_int(1), parse("w"), parse("w*2+1")]
    g = [from_int(1), from_int(4), parse("w"), parse("w*3")]
    p = p_of(ladder, sorted(set(f) | set(g)))
    for a in set(f) & set(g):
        fa = [x for x in f if x <= a]
        ga = [x for x in g if x <= a]
        assert closure(ladder, fa, p) == closure(ladder, ga, p)


def test_model_roundtrip(ladder):
    pts = [parse(t) for t in ("1", "w", "w+3", "w*2")]
    model = model_of(ladder, pts)
    assert model.size == 4
    assert model.validate() == []
    # tri stores the upper triangle row-major
    assert model.value(0, 1) == rho_eval(ladder, pts[0], pts[1])
    assert models_isomorphic(model, model)


def test_enumerate_models_counts():
    assert len(enumerate_models(2, 2)) == 4
    models = enumerate_models(3, 3)
    assert len(models) == 41
    # pairwise non-isomorphic
    for a, b in combinations(models, 2):
        assert not models_isomorphic(a, b)


def test_universal_realizes_queue():
    models = enumerate_models(2, 2)
    rho, certs = build_universal_rho(parse("w*8"), [(m, None) for m in models])
    assert len(certs) == len(models)
    assert all(c.ok for c in certs)
    for model, cert in zip(models, certs):
        realized = cert.details["m1"]
        assert models_isomorphic(model_of(rho, realized), model)


def test_universal_extend_rejects_bad_targets():
    rho, _ = build_universal_rho(parse("w*4"), [])
    with pytest.raises(RhoError):
        universal_extend(rho, RhoModel(size=1, tri=(), p=1),
                         block=parse("w*9"))


def test_rho_bar_dominates(ladder):
    a, b = parse("w"), parse("w*2+1")
    assert rho_bar(ladder, a, b) >= rho_eval(ladder, a, b)


def test_smoothness_surrogate(smooth):
    rep = smoothness_report(smooth, parse("w^2+w"), 32)
    assert rep.ok
    assert rep.details["successor_limit_bound_violations"] == []
    flat = smoothness_report(smooth, OMEGA, 32)
    assert max(flat.details["sizes"].values()) <= 32


def test_twin_base_layout():
    base = make_twin_base(4, 6)
    # inside the root and inside a branch: local positions
    assert base(0, 3) == 3
    assert base(5, 9) == (9 - 4) % 6
    assert base(11, 15) == (15 - 4) % 6
    # root to branch: the split constant
    assert base(1, 7) == 4
    # across branches: above everything in-branch
    assert base(5, 12) == 7
    with pytest.raises(RhoError):
        build_ladder_rho(parse("w+1"))  # bound must be a nonzero limit
