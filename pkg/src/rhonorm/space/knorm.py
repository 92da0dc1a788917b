"""Desk evaluation of the norm whose odd weights act only through coded
special sequences.

The even-weight operations are priced exactly by the mixed-Tsirelson dynamic
program.  Odd weights are a closed world: the evaluator accepts a set of
registered chains (SpecialSequence values) and enumerates every functional
those chains can produce -- interval crops of a consecutive run of chain
elements, optionally extended by one priced continuation block at the slot
the chain's own record dictates.  The reported value is therefore exact for
the family generated by the given chains; it is *not* a certificate against
chains that were never registered.  `k_norm_bounds` pairs this with the full
mixed-Tsirelson value, which dominates every functional of either kind.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from ..ordinals import OMEGA, Ordinal
from ..reports import CheckReport, Waiver
from ..rho import RhoFn, build_ladder_rho
from ..vectors import Vec00
from ..norms.functionals import (FCombine, FLeaf, Functional, evaluate,
                                 flag_audit, negate, restrict_interval,
                                 restrict_set, validate_tree)
from ..norms.schedules import ParamSchedule
from ..norms.tsirelson import (ExtraCandidate, TsirelsonDP, norming_enumerate,
                               tsirelson_norm)
from .coding import CodingError, CodingState, ScheduleExhausted
from .depseq import DependentSequence, canonical_pair_source, dependent_sequence_build
from .special import BlockAllocator, SpecialSequence, build_special_sequence


# -- chain candidates ------------------------------------------------------


def _scan(pref: Sequence[Fraction], tlo: int, thi: int
          ) -> tuple[tuple[Fraction, int], tuple[Fraction, int]]:
    """(max, argmax), (min, argmin) of pref[t] over t in [tlo, thi]."""
    hi = lo = (pref[tlo], tlo)
    for t in range(tlo + 1, thi + 1):
        v = pref[t]
        if v > hi[0]:
            hi = (v, t)
        if v < lo[0]:
            lo = (v, t)
    return hi, lo


class _ChainCatalog:
    """Crop tables for one registered chain against one DP's vector.

    Element e's coefficient profile is folded against the vector once:
    pref[e][t] is the value of the first t profile entries, so any interval
    crop of the element is a prefix-sum difference.  A maximising run only
    ever needs the extreme cuts on its two boundary elements, which keeps
    the per-segment candidate count linear in the chain length.
    """

    def __init__(self, chain: SpecialSequence, dp: TsirelsonDP,
                 sched: ParamSchedule) -> None:
        self.chain = chain
        self.slot = chain.odd_slot
        self.weight = sched.weight(self.slot)
        self.cap = sched.arity(self.slot)
        xmap = dict(dp.entries)
        self.coords: list[list[Ordinal]] = []
        self.pref: list[list[Fraction]] = []
        for phi in chain.phis:
            prof = phi.vector.entries
            acc = [Fraction(0)]
            for c, q in prof:
                acc.append(acc[-1] + q * xmap.get(c, Fraction(0)))
            self.coords.append([c for c, _ in prof])
            self.pref.append(acc)
        self.full = [p[-1] for p in self.pref]

    def _piece(self, e: int, c1: int, c2: int) -> Functional:
        cs = self.coords[e]
        if c1 == 0 and c2 == len(cs) - 1:
            return self.chain.phis[e]
        out = restrict_interval(self.chain.phis[e], cs[c1], cs[c2])
        assert out is not None
        return out

    def candidates(self, lo: Ordinal, hi: Ordinal, dp: TsirelsonDP,
                   mode: str, sched: ParamSchedule, build: bool
                   ) -> Iterator[tuple[Fraction, Optional[Functional]]]:
        """With build unset only the values are produced (the DP's value
        pass ignores witnesses); the witness replay re-enumerates with
        build set and gets identical values in identical order."""
        wins = []
        for cs in self.coords:
            wl = bisect_left(cs, lo)
            wr = bisect_right(cs, hi) - 1
            wins.append((wl, wr))
        avail = [e for e in range(self.chain.length) if wins[e][0] <= wins[e][1]]
        if not avail:
            return
        tag = ("chain", self.chain.coding_root, self.slot)
        last = self.chain.length - 1
        for a in avail:
            for b in avail:
                if b < a or b - a + 1 > self.cap:
                    continue
                yield from self._run(a, b, wins, tag, build=build)
                # same run, boundary element taken whole, one priced
                # continuation block after it
                if (b - a + 2 <= self.cap and b < last
                        and wins[b][1] == len(self.coords[b]) - 1):
                    tslot = self.chain.slots[b + 1]
                    if mode == "strict" and \
                            sched.weight(tslot) <= self.chain.weights[b]:
                        continue
                    tc = dp.slot_candidate(tslot, self.coords[b][-1].succ(), hi)
                    if tc is not None:
                        yield from self._run(a, b, wins, tag, tail=tc,
                                             build=build)

    def _run(self, a: int, b: int, wins: list[tuple[int, int]],
             tag: tuple, tail: Optional[ExtraCandidate] = None,
             build: bool = True
             ) -> Iterator[tuple[Fraction, Optional[Functional]]]:
        pa = self.pref[a]
        na = len(self.coords[a])
        if a == b and tail is None:
            # two-sided crop of a single element
            best = worst = None
            pmin = pmax = (pa[wins[a][0]], wins[a][0])
            for c2 in range(wins[a][0], wins[a][1] + 1):
                if pa[c2] < pmin[0]:
                    pmin = (pa[c2], c2)
                if pa[c2] > pmax[0]:
                    pmax = (pa[c2], c2)
                v = pa[c2 + 1]
                if best is None or v - pmin[0] > best[0]:
                    best = (v - pmin[0], pmin[1], c2)
                if worst is None or v - pmax[0] < worst[0]:
                    worst = (v - pmax[0], pmax[1], c2)
            assert best is not None and worst is not None
            pick = best if abs(best[0]) >= abs(worst[0]) else worst
            if pick[0] == 0:
                return
            val = pick[0] / self.weight
            if not build:
                yield abs(val), None
                return
            tree: Functional = FCombine(
                self.slot, self.weight, (self._piece(a, pick[1], pick[2]),),
                special=tag)
            yield (val, tree) if val > 0 else (-val, negate(tree))
            return
        # left boundary: suffix crops of element a (value = pa[na] - pa[c1])
        lhi, llo = _scan(pa, wins[a][0], na - 1)
        lefts = [(pa[na] - llo[0], llo[1]), (pa[na] - lhi[0], lhi[1])]
        mids = sum((self.full[e] for e in range(a + 1, b)), Fraction(0))
        rights: list[tuple[Fraction, Optional[int]]]
        if tail is not None:
            base_r = self.full[b] if b > a else Fraction(0)
            rights = [(base_r + tail[0], None), (base_r - tail[0], None)]
        else:
            pb = self.pref[b]
            rhi, rlo = _scan(pb, 1, wins[b][1] + 1)
            rights = [(rlo[0], rlo[1] - 1), (rhi[0], rhi[1] - 1)]
        pick_val: Optional[Fraction] = None
        pick_c: tuple = ()
        for lv, c1 in lefts:
            for rv, c2 in rights:
                tot = lv + mids + rv
                if pick_val is None or abs(tot) > abs(pick_val):
                    pick_val, pick_c = tot, (c1, c2, rv)
        assert pick_val is not None
        if pick_val == 0:
            return
        if not build:
            yield abs(pick_val) / self.weight, None
            return
        c1, c2, rv = pick_c
        children: list[Functional] = [self._piece(a, c1, len(self.coords[a]) - 1)]
        children.extend(self.chain.phis[e] for e in range(a + 1, b))
        if tail is not None:
            if b > a:
                children.append(self.chain.phis[b])
            base_r = self.full[b] if b > a else Fraction(0)
            child = tail[1]
            if rv == base_r - tail[0]:
                child = negate(child)
            children.append(child)
        elif b > a:
            children.append(self._piece(b, 0, c2))
        tree = FCombine(self.slot, self.weight, tuple(children), special=tag)
        val = pick_val / self.weight
        yield (val, tree) if val > 0 else (-val, negate(tree))


def _chain_hook(holder: dict, chains: tuple[SpecialSequence, ...],
                sched: ParamSchedule, mode: str):
    catalogs: list[Optional[_ChainCatalog]] = [None] * len(chains)

    def hook(lo: Ordinal, hi: Ordinal) -> list[ExtraCandidate]:
        dp = holder.get("dp")
        if dp is None:
            return []
        build = holder.get("phase") != "value"
        out: list[ExtraCandidate] = []
        for ci, chain in enumerate(chains):
            if chain.length == 0:
                continue
            cat = catalogs[ci]
            if cat is None:
                cat = catalogs[ci] = _ChainCatalog(chain, dp, sched)
            out.extend(cat.candidates(lo, hi, dp, mode, sched, build))
        return out

    return hook


def k_desk_norm(x: Vec00, sched: ParamSchedule,
                chains: Iterable[SpecialSequence] = (), *,
                mode: str = "toy"
                ) -> tuple[Fraction, Optional[Functional]]:
    """Exact value of x under leaves, even-weight operations, and every
    odd-weight functional the given chains generate (closed world).

    Returns (value, witness).  In strict mode a priced continuation block is
    only admitted when its weight exceeds the boundary element's, matching
    the unrelaxed chain shape rules; toy mode prices it regardless, which is
    what the waived shape discipline of toy codings permits.
    """
    if mode not in ("strict", "toy"):
        raise ValueError(f"unknown mode {mode!r}")
    if x.is_zero():
        return Fraction(0), None
    chains = tuple(chains)
    holder: dict = {}
    extra = _chain_hook(holder, chains, sched, mode) if chains else None
    dp = TsirelsonDP(x, sched, slots=sched.even_slots(), extra=extra)
    holder["dp"] = dp
    holder["phase"] = "value"
    value = dp.norm()
    holder["phase"] = "witness"
    return value, dp.witness()


# -- two-sided bounds ------------------------------------------------------


def _aligned_chain(x: Vec00, sched: ParamSchedule, rho: RhoFn,
                   coding: CodingState) -> Optional[SpecialSequence]:
    """A registered chain whose blocks read x's coordinates with matching
    signs; built on a fork so the caller's coding state stays untouched."""
    if len(sched) < 4 or 3 > len(sched):
        return None
    pts = x.support()
    signs = {c: (1 if v > 0 else -1) for c, v in x.entries}
    cursor = {"i": 0}

    def source(slot: int) -> Functional:
        need = sched.arity(slot)
        take = pts[cursor["i"]:cursor["i"] + need]
        if not take:
            raise ScheduleExhausted("support exhausted while aligning")
        cursor["i"] += len(take)
        return FCombine(slot, sched.weight(slot),
                        tuple(FLeaf(signs[c], c) for c in take))

    top = min(sched.arity(3), len(pts))
    for length in range(top, 0, -1):
        fork = coding.fork(f"knorm-align-{length}")
        cursor["i"] = 0
        try:
            return build_special_sequence(source, 3, sched, rho, fork,
                                          length=length, start_slot=4)
        except (ScheduleExhausted, CodingError, ValueError):
            continue
    return None


def k_norm_bounds(x: Vec00, sched: ParamSchedule,
                  rho: Optional[RhoFn] = None,
                  coding: Optional[CodingState] = None, *,
                  budget: int = 2000, depth: int = 2,
                  chains: Iterable[SpecialSequence] = ()
                  ) -> tuple[Fraction, Fraction]:
    """(lower, upper) for the coded norm of x.

    upper is the full mixed-Tsirelson value, which dominates the coded
    family.  lower is the best witnessed evaluation: the sup norm, a
    budgeted sweep of even-weight functionals over x's support, and -- when
    a rho function and coding state are supplied and the budget is at least
    100 -- special functionals from a chain assembled against x's own
    coordinates on a coding fork.  lower never decreases as the budget
    grows.
    """
    lower, upper, _ = k_norm_bounds_witness(x, sched, rho, coding,
                                            budget=budget, depth=depth,
                                            chains=chains)
    return lower, upper


def k_norm_bounds_witness(x: Vec00, sched: ParamSchedule,
                          rho: Optional[RhoFn] = None,
                          coding: Optional[CodingState] = None, *,
                          budget: int = 2000, depth: int = 2,
                          chains: Iterable[SpecialSequence] = ()
                          ) -> tuple[Fraction, Fraction, Optional[Functional]]:
    """k_norm_bounds plus the functional attaining the lower bound."""
    upper = tsirelson_norm(x, sched)
    if x.is_zero():
        return Fraction(0), upper, None
    lower = Fraction(0)
    wit: Optional[Functional] = None
    for pos, coeff in x.entries:
        if abs(coeff) > lower:
            lower = abs(coeff)
            wit = FLeaf(1 if coeff > 0 else -1, pos)
    for f in norming_enumerate(x.support(), sched, depth, budget=budget,
                               slots=sched.even_slots()):
        v = abs(evaluate(f, x))
        if v > lower:
            lower, wit = v, (negate(f) if evaluate(f, x) < 0 else f)
    pool = tuple(chains)
    if rho is not None and coding is not None and budget >= 100:
        aligned = _aligned_chain(x, sched, rho, coding)
        if aligned is not None:
            pool = pool + (aligned,)
    if pool:
        desk, dwit = k_desk_norm(x, sched, pool)
        if desk > lower:
            lower, wit = desk, dwit
    assert lower <= upper
    return lower, upper, wit


# -- tree analyses and restriction closure ---------------------------------


def tree_analysis_validate(f: Functional, sched: ParamSchedule) -> CheckReport:
    """Check a functional's tree against the family shape rules: signed
    leaves, slot/weight agreement, arity caps, successive children, child
    ranges nested in the parent hull, sub-convex coefficients."""
    problems = validate_tree(f, sched)
    return CheckReport("tree-analysis", not problems, details={
        "nodes": flag_audit(f),
        "first_violation": problems[0] if problems else None,
        "problem_count": len(problems),
        "problems": problems[:12],
    })


def restriction_admissible(f: Functional, kind: str, *,
                           unconditional: bool = False) -> bool:
    """Whether restricting f by the given mechanism stays inside the family.

    Interval restrictions are always admitted.  Arbitrary-set restrictions
    are admitted only under the unconditional variant, and there only for
    leaves and odd-weight combinations."""
    if kind == "interval":
        return True
    if kind != "set":
        raise ValueError(f"unknown restriction kind {kind!r}")
    if not unconditional:
        return False
    if isinstance(f, FLeaf):
        return True
    return isinstance(f, FCombine) and f.slot % 2 == 1


def restriction_audit(f: Functional, sched: ParamSchedule, *,
                      unconditional: bool = False) -> CheckReport:
    """Structural closure audit: restrict f by a middle-third interval and
    (when admitted) by an every-other coordinate set, and re-validate
    whatever survives."""
    vec = f.vector
    if vec.is_zero():
        return CheckReport("restriction-audit", True,
                           details={"note": "empty trace", "rows": []})
    sup = vec.support()
    rows: list[dict] = []
    ok = True
    third = len(sup) // 3
    ilo, ihi = sup[third], sup[min(len(sup) - 1, 2 * third)]
    ri = restrict_interval(f, ilo, ihi)
    valid = ri is None or not validate_tree(ri, sched)
    rows.append({"kind": "interval", "lo": ilo, "hi": ihi,
                 "survived": ri is not None, "valid": valid})
    ok = ok and valid
    admitted = restriction_admissible(f, "set", unconditional=unconditional)
    row: dict = {"kind": "set", "admitted": admitted}
    if admitted:
        rs = restrict_set(f, frozenset(sup[::2]))
        valid = rs is None or not validate_tree(rs, sched)
        row.update(survived=rs is not None, valid=valid)
        ok = ok and valid
    rows.append(row)
    return CheckReport("restriction-audit", ok, details={
        "rows": rows, "unconditional": unconditional})


# -- the alternating-sign demonstration ------------------------------------


def alternating_sum_demo(dep: DependentSequence,
                         sched: ParamSchedule) -> CheckReport:
    """Evaluate the two averages a dependent sequence separates.

    The chain's own functional is evaluated exactly on the plain average and
    must reach 1/m at the odd slot; the sign-alternating average gets the
    general two-sided bounds plus the closed-world desk value against the
    sequence's chain.  The separation row records whether the witnessed
    lower bound for the plain average strictly beats the desk value of the
    alternating one."""
    m = sched.weight(dep.odd_slot)
    if dep.length == 0:
        return CheckReport("alternating-sum", True, details={
            "length": 0, "plain_lower": Fraction(0),
            "alt_desk": Fraction(0), "separated": False})
    plain = dep.plain_average()
    alt = dep.alternating_average()
    finale = dep.special.finale(sched)
    fv = evaluate(finale, plain)
    finale_ok = fv >= Fraction(1, m)
    audit = tree_analysis_validate(finale, sched)

    def bounds(x: Vec00) -> tuple[Fraction, Fraction, Fraction, Optional[Functional]]:
        desk, wit = k_desk_norm(x, sched, (dep.special,))
        lower = max(x.sup_norm(), desk)
        for f in norming_enumerate(x.support(), sched, 2, budget=2000,
                                   slots=sched.even_slots()):
            v = abs(evaluate(f, x))
            if v > lower:
                lower = v
        return lower, tsirelson_norm(x, sched), desk, wit

    plain_lo, plain_up, _, _ = bounds(plain)
    alt_lo, alt_up, alt_desk, alt_wit = bounds(alt)
    plain_bounds = (plain_lo, plain_up)
    alt_bounds = (alt_lo, alt_up)
    wit_audit = (tree_analysis_validate(alt_wit, sched)
                 if alt_wit is not None else None)
    plain_lower = max(fv, plain_bounds[0])
    separated = plain_lower > alt_desk
    ok = finale_ok and audit.ok and (wit_audit is None or wit_audit.ok)
    details = {
        "length": dep.length,
        "odd_slot": dep.odd_slot,
        "weight": m,
        "finale_on_plain": fv,
        "finale_target": Fraction(1, m),
        "finale_ok": finale_ok,
        "finale_audit": audit,
        "plain_bounds": {"lower": plain_bounds[0], "upper": plain_bounds[1]},
        "alt_bounds": {"lower": alt_bounds[0], "upper": alt_bounds[1]},
        "alt_desk": alt_desk,
        "alt_witness_audit": wit_audit,
        "plain_lower": plain_lower,
        "separated": separated,
    }
    if separated:
        details["ratio"] = plain_lower / alt_desk
    return CheckReport("alternating-sum", ok, details=details,
                       waivers=list(dep.special.waivers))


def hi_demo(*, adversaries: int = 3) -> CheckReport:
    """End-to-end fixture: a schedule whose even slots are inert (m = n)
    except at the target odd slot, a length-5 dependent sequence against the
    ladder rho function, and the two averages it separates exactly."""
    sched = ParamSchedule(m=(2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16),
                          n=(2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16))
    rho = build_ladder_rho(OMEGA)
    coding = CodingState(mode="toy", max_slot=len(sched))
    source = canonical_pair_source(sched, BlockAllocator())
    dep, build_rep = dependent_sequence_build(
        1, source, sched, rho, coding, length=5, start_slot=4,
        adversaries=adversaries)
    demo = alternating_sum_demo(dep, sched)
    separated = bool(demo.details.get("separated"))
    waivers = list(build_rep.waivers)
    for w in demo.waivers:
        if w not in waivers:
            waivers.append(w)
    return CheckReport(
        "hi-demo", build_rep.ok and demo.ok and separated,
        details={
            "schedule": {"m": list(sched.m), "n": list(sched.n)},
            "length": dep.length,
            "odd_slot": dep.odd_slot,
            "build": build_rep,
            "demo": demo,
            "note": ("desk certificates quantify over the chains registered "
                     "in this run's coding state"),
        },
        waivers=waivers)
