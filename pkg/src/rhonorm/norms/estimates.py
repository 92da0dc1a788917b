"""Checkable estimate predicates for the norming families.

Two kinds of checks live here: pointwise bounds for functionals acting on
flat averages of basis vectors, and the transfer inequality comparing a
James-collapsed coefficient vector against the norm of the underlying block
sum.  Everything is exact; bounds whose derivations need the canonical
schedule's growth are reported (with a waiver) instead of asserted on small
hand schedules.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..ordinals import Ordinal, from_int
from ..reports import CheckReport, Waiver
from ..vectors import Vec00, successive
from .functionals import (FCombine, FLeaf, Functional, evaluate, iter_nodes,
                          negate, render_functional, restrict_interval,
                          validate_tree)
from .james import james_norm, james_norm_witness
from .schedules import ParamSchedule
from .tsirelson import norming_enumerate


def has_weight_node(f: Functional, weight: int) -> bool:
    return any(isinstance(node, FCombine) and node.weight == weight
               for node in iter_nodes(f))


def basis_estimate_check(sched: ParamSchedule, j: int, l: int,
                         f_set: Sequence[Ordinal],
                         phi: Functional) -> CheckReport:
    """|phi((1/l) sum of e_a, a in F)| against the three flat-average bounds:
    2/(w m_j) when w < m_j, 1/w when w >= m_j, and 2/m_j^3 when no node of
    phi carries weight m_j (that last one needs the canonical growth, so it
    is asserted only on paper-exact schedules)."""
    mj, nj = sched.weight(j), sched.arity(j)
    if len(f_set) != l:
        raise ValueError(f"F has {len(f_set)} points, l = {l}")
    if not Fraction(nj, mj) <= l <= nj:
        raise ValueError(f"l = {l} outside [n_j/m_j, n_j] = "
                         f"[{Fraction(nj, mj)}, {nj}]")
    if not isinstance(phi, FCombine):
        raise ValueError("phi must be a weighted (type I) functional")
    w = phi.weight
    x = Vec00.make([(a, Fraction(1, l)) for a in f_set])
    value = abs(evaluate(phi, x))

    rows = []
    waivers: list[Waiver] = []
    if w < mj:
        rows.append({"case": "w<mj", "bound": Fraction(2, w * mj),
                     "asserted": True})
    else:
        rows.append({"case": "w>=mj", "bound": Fraction(1, w),
                     "asserted": True})
    if not has_weight_node(phi, mj):
        asserted = sched.paper_exact
        rows.append({"case": "no-mj-node", "bound": Fraction(2, mj ** 3),
                     "asserted": asserted})
        if not asserted:
            waivers.append(Waiver(
                "growth", "2/m_j^3 case reported only: schedule is not the "
                          "canonical recursion"))
    for row in rows:
        row["ok"] = value <= row["bound"]
    ok = all(row["ok"] for row in rows if row["asserted"])
    return CheckReport(
        name="basis-estimate",
        ok=ok,
        details={"j": j, "l": l, "w": w, "value": value, "rows": rows,
                 "phi": render_functional(phi)},
        waivers=tuple(waivers),
    )


def _even_only(phi: Functional) -> bool:
    return all(node.slot % 2 == 0 for node in iter_nodes(phi)
               if isinstance(node, FCombine))


def _mirror(tree: Functional, hulls: dict[int, tuple[Ordinal, Ordinal]],
            phi: Functional) -> Functional:
    """Transport a base-space witness over collapsed positions back to a
    functional on the original line: leaves become interval restrictions of
    phi, weighted nodes move from sub-slot q to main slot 2q."""
    if isinstance(tree, FLeaf):
        lo, hi = hulls[tree.idx.as_natural()]
        piece = restrict_interval(phi, lo, hi)
        assert piece is not None
        return piece if tree.sign == 1 else negate(piece)
    assert isinstance(tree, FCombine)
    return FCombine(2 * tree.slot, tree.weight,
                    tuple(_mirror(c, hulls, phi) for c in tree.children))


def lkio1_check(xs: Sequence[Vec00], phi: Functional, sched: ParamSchedule,
                *, depth: int = 2, budget: Optional[int] = 4000) -> CheckReport:
    """James norm of the coefficient vector (phi(x_i))_i, measured in the
    even subschedule space, against a certified lower bound for ||sum x_i||.

    The certificate always contains the mirrored witness functional, which
    reproduces the left side exactly, so the inequality is structural: the
    check fails only if the mirror construction itself is broken.
    """
    if not xs:
        raise ValueError("need at least one block")
    if not successive(*xs):
        raise ValueError("blocks must be successive")
    if not _even_only(phi):
        raise ValueError("phi must use even-slot weights only")
    t0 = sched.even_subschedule()
    r = Vec00.make([(from_int(i + 1), evaluate(phi, x)) for i, x in enumerate(xs)])
    left = james_norm(r, t0)
    total = Vec00()
    for x in xs:
        total = total + x

    details: dict = {"r": r, "left": left}
    mirror_val = Fraction(0)
    mirror_ok = True
    if left != 0:
        value, hulls, _collapsed, tree = james_norm_witness(r, t0)
        assert value == left and tree is not None
        pos_hull: dict[int, tuple[Ordinal, Ordinal]] = {}
        for q, (lo_pos, hi_pos) in enumerate(hulls, start=1):
            ilo, ihi = lo_pos.as_natural() - 1, hi_pos.as_natural() - 1
            pos_hull[q] = (xs[ilo].min_support(), xs[ihi].max_support())
        mirror = _mirror(tree, pos_hull, phi)
        mirror_val = evaluate(mirror, total)
        mirror_ok = (mirror_val == left) and not validate_tree(mirror, sched)
        details["mirror"] = render_functional(mirror)
        details["mirror_value"] = mirror_val
        details["groups"] = [list(h) for h in pos_hull.values()]

    right = max(mirror_val, total.sup_norm())
    for cand in norming_enumerate(tuple(total.support()), sched, depth,
                                  budget=budget, slots=sched.even_slots()):
        got = evaluate(cand, total)
        if got > right:
            right = got
    details["right"] = right
    return CheckReport(name="block-transfer", ok=mirror_ok and left <= right,
                       details=details)
