"""Mixed-Tsirelson norms, exactly.

The implicit norm  ||x|| = max(||x||_inf, max_j (1/m_j) sup Sum ||E_i x||)
over successive interval decompositions E_1 < ... < E_d, d <= n_j, is
computed by dynamic programming on the (finite) support of x.  Everything
is Fraction arithmetic; no floats anywhere.

Three independent evaluators live here:
  * TsirelsonDP      -- the production interval DP, with witness replay;
  * oracle_norm      -- breadth-first closure over coefficient profiles,
                        used as an oracle against the DP;
  * norming_enumerate -- literal streaming of functional trees, the
                        slowest and most direct reading of the definition.

The DP takes hooks (slot filter, arity scaling, extra segment candidates)
so the auxiliary W norm and the coding-aware evaluator reuse one engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from ..ordinals import Ordinal
from ..vectors import Vec00
from .functionals import (FCombine, FLeaf, Functional, negate,
                          restrict_interval)
from .schedules import ParamSchedule

# An extra candidate for a support segment: exact value attained on the
# segment plus a replayable witness functional (already restricted).
ExtraCandidate = tuple[Fraction, Functional]
ExtraHook = Callable[[Ordinal, Ordinal], Iterable[ExtraCandidate]]


class TsirelsonDP:
    """Interval dynamic programme for one fixed vector."""

    def __init__(self, x: Vec00, sched: ParamSchedule, *,
                 slots: Optional[Sequence[int]] = None,
                 arity_factor: int = 1,
                 extra: Optional[ExtraHook] = None) -> None:
        self.x = x
        self.sched = sched
        self.slots = tuple(slots) if slots is not None else tuple(sched.slots())
        self.arity_factor = arity_factor
        self.extra = extra
        self.entries = x.entries  # ((Ordinal, Fraction), ...) sorted
        self._seg: dict[tuple[int, int], Fraction] = {}
        self._rest_memo: dict[tuple[int, int, int], Fraction] = {}
        self._split2_memo: dict[tuple[int, int, int], Fraction] = {}
        self._slotc: dict[tuple[int, int, int], Optional[ExtraCandidate]] = {}
        self._sml: dict[tuple[int, int], Fraction] = {}
        acc = [Fraction(0)]
        for _, c in self.entries:
            acc.append(acc[-1] + abs(c))
        self._l1p = acc

    def _l1(self, i: int, j: int) -> Fraction:
        """l1 mass of [i, j); an upper bound for every family value there,
        since every functional's coefficient profile stays within [-1, 1]."""
        return self._l1p[j] - self._l1p[i]

    def _seg_less_l1p(self, i: int, k: int) -> Fraction:
        """seg_norm(i, k) - l1-prefix(k), the per-k side of the pruning
        comparison seg(i,k) + l1(k,j) <= best with the j-part moved over."""
        key = (i, k)
        got = self._sml.get(key)
        if got is None:
            got = self.seg_norm(i, k) - self._l1p[k]
            self._sml[key] = got
        return got

    def _cap(self, slot: int) -> int:
        return self.sched.arity(slot) * self.arity_factor

    def norm(self) -> Fraction:
        if not self.entries:
            return Fraction(0)
        return self.seg_norm(0, len(self.entries))

    # -- value tables -------------------------------------------------

    def seg_norm(self, i: int, j: int) -> Fraction:
        key = (i, j)
        got = self._seg.get(key)
        if got is not None:
            return got
        best = max(abs(c) for _, c in self.entries[i:j])
        if j - i >= 2:
            l1all = self._l1(i, j)
            for slot in self.slots:
                cap = min(self._cap(slot), j - i)
                w = self.sched.weight(slot)
                if cap >= 2 and l1all / w > best:
                    cand = self._split2(i, j, cap) / w
                    if cand > best:
                        best = cand
        if self.extra is not None:
            lo, hi = self.entries[i][0], self.entries[j - 1][0]
            for value, _ in self.extra(lo, hi):
                if value > best:
                    best = value
        self._seg[key] = best
        return best

    def _split2(self, i: int, j: int, t: int) -> Fraction:
        """Best sum over decompositions of [i,j) into 2..t parts."""
        key = (i, j, t)
        got = self._split2_memo.get(key)
        if got is not None:
            return got
        best = None
        l1all = self._l1(i, j)
        rhs = None
        for k in range(i + 1, j):
            if best is not None:
                if best >= l1all:
                    break
                if self._seg_less_l1p(i, k) <= rhs:
                    continue
            cand = self.seg_norm(i, k) + self._rest(k, j, t - 1)
            if best is None or cand > best:
                best = cand
                rhs = best - self._l1p[j]
        assert best is not None
        self._split2_memo[key] = best
        return best

    def _rest(self, i: int, j: int, t: int) -> Fraction:
        if t == 1 or j - i == 1:
            return self.seg_norm(i, j)
        if t >= j - i:  # finest split wins by subadditivity: plain l1 mass
            return self._l1(i, j)
        key = (i, j, t)
        got = self._rest_memo.get(key)
        if got is not None:
            return got
        best = self.seg_norm(i, j)
        l1all = self._l1(i, j)
        if best < l1all:
            rhs = best - self._l1p[j]
            for k in range(i + 1, j):
                if self._seg_less_l1p(i, k) <= rhs:
                    continue
                cand = self.seg_norm(i, k) + self._rest(k, j, t - 1)
                if cand > best:
                    best = cand
                    if best >= l1all:
                        break
                    rhs = best - self._l1p[j]
        self._rest_memo[key] = best
        return best

    def index_range(self, lo: Ordinal, hi: Ordinal) -> tuple[int, int]:
        """Entry indices [i, j) whose coordinates fall inside [lo, hi]."""
        i, n = 0, len(self.entries)
        while i < n and self.entries[i][0] < lo:
            i += 1
        j = i
        while j < n and self.entries[j][0] <= hi:
            j += 1
        return i, j

    def slot_candidate(self, slot: int, lo: Ordinal, hi: Ordinal
                       ) -> Optional[ExtraCandidate]:
        """Best single weight-m_slot functional over the entries inside
        [lo, hi], with a replayable witness.  Hooks use this to price the
        continuation of a partially matched chain on a tail segment."""
        i, j = self.index_range(lo, hi)
        if j <= i:
            return None
        memo_key = (slot, i, j)
        if memo_key in self._slotc:
            return self._slotc[memo_key]
        w = self.sched.weight(slot)
        cap = min(self._cap(slot), j - i)
        best = self.seg_norm(i, j)
        parts: list[tuple[int, int]] = [(i, j)]
        if cap >= 2:
            two = self._split2(i, j, cap)
            if two > best:
                best = two
                parts = self._wit_parts(i, j, cap, first_two=True)
        children = tuple(self._wit_seg(a, b) for a, b in parts)
        out = (best / w, FCombine(slot, w, children))
        self._slotc[memo_key] = out
        return out

    # -- witness replay ----------------------------------------------

    def witness(self) -> Optional[Functional]:
        """A functional from the family attaining norm() on x, exactly."""
        if not self.entries:
            return None
        return self._wit_seg(0, len(self.entries))

    def _wit_seg(self, i: int, j: int) -> Functional:
        target = self.seg_norm(i, j)
        for k in range(i, j):
            idx, c = self.entries[k]
            if abs(c) == target:
                return FLeaf(1 if c >= 0 else -1, idx)
        if self.extra is not None:
            lo, hi = self.entries[i][0], self.entries[j - 1][0]
            for value, tree in self.extra(lo, hi):
                if value == target:
                    return tree
        for slot in self.slots:
            cap = min(self._cap(slot), j - i)
            if cap >= 2 and self._split2(i, j, cap) / self.sched.weight(slot) == target:
                parts = self._wit_parts(i, j, cap, first_two=True)
                children = tuple(self._wit_seg(a, b) for a, b in parts)
                return FCombine(slot, self.sched.weight(slot), children)
        raise AssertionError("witness replay lost the optimum")

    def _wit_parts(self, i: int, j: int, t: int,
                   first_two: bool = False) -> list[tuple[int, int]]:
        """Recover an optimal partition of [i,j) into <= t parts (>= 2 when
        first_two is set)."""
        if not first_two:
            if t == 1 or j - i == 1:
                return [(i, j)]
            if t >= j - i:
                return [(k, k + 1) for k in range(i, j)]
            if self._rest(i, j, t) == self.seg_norm(i, j):
                return [(i, j)]
        target = self._split2(i, j, t) if first_two else self._rest(i, j, t)
        for k in range(i + 1, j):
            if self.seg_norm(i, k) + self._rest(k, j, t - 1) == target:
                return [(i, k)] + self._wit_parts(k, j, t - 1)
        raise AssertionError("partition replay lost the optimum")


def tsirelson_norm(x: Vec00, sched: ParamSchedule) -> Fraction:
    return TsirelsonDP(x, sched).norm()


def tsirelson_norm_witness(x: Vec00, sched: ParamSchedule
                           ) -> tuple[Fraction, Optional[Functional]]:
    dp = TsirelsonDP(x, sched)
    value = dp.norm()
    wit = dp.witness()
    if wit is not None and wit.vector.dot(x) != value:
        raise AssertionError("witness does not attain the computed norm")
    return value, wit


def aux_w_norm(x: Vec00, sched: ParamSchedule) -> Fraction:
    """The auxiliary norm with arity caps 4*n_j at every slot."""
    return TsirelsonDP(x, sched, arity_factor=4).norm()


# ---------------------------------------------------------------------------
# Oracle 1: breadth-first closure of coefficient profiles.
#
# Restricting to nonnegative profiles is sound: each support point is read
# by exactly one leaf of any functional tree, so flipping leaf signs maps
# the family onto itself and max f(x) = max over nonnegative profiles of
# the dot product with |x|.

_Profile = tuple[Fraction, ...]


def _span(p: _Profile) -> tuple[int, int]:
    nz = [i for i, v in enumerate(p) if v != 0]
    return (nz[0], nz[-1])


def _prune_same_span(pool: set[_Profile]) -> set[_Profile]:
    by_span: dict[tuple[int, int], list[_Profile]] = {}
    for p in pool:
        by_span.setdefault(_span(p), []).append(p)
    kept: set[_Profile] = set()
    for group in by_span.values():
        for p in group:
            if not any(q != p and all(a <= b for a, b in zip(p, q))
                       for q in group):
                kept.add(p)
    return kept


def _successive_sums(pool: list[_Profile], max_parts: int,
                     npts: int) -> Iterator[_Profile]:
    by_start: dict[int, list[_Profile]] = {}
    for p in pool:
        by_start.setdefault(_span(p)[0], []).append(p)

    def extend(acc: _Profile, start: int, parts_left: int) -> Iterator[_Profile]:
        for s in range(start, npts):
            for p in by_start.get(s, ()):
                summed = tuple(a + b for a, b in zip(acc, p))
                yield summed
                if parts_left > 1:
                    yield from extend(summed, _span(p)[1] + 1, parts_left - 1)

    # at least two parts: one part alone is never better after scaling
    for s in range(npts):
        for p in by_start.get(s, ()):
            yield from extend(p, _span(p)[1] + 1, max_parts - 1)


def norming_profiles(npts: int, sched: ParamSchedule, depth: int, *,
                     arity_factor: int = 1) -> list[_Profile]:
    """All coefficient profiles of tree height <= depth on npts points,
    nonnegative representatives, dominated ones removed at the end."""
    pool: set[_Profile] = set()
    for i in range(npts):
        pool.add(tuple(Fraction(1 if k == i else 0) for k in range(npts)))
    for _ in range(depth):
        fresh: set[_Profile] = set()
        pool_list = sorted(pool)
        for slot in sched.slots():
            cap = min(sched.arity(slot) * arity_factor, npts)
            if cap < 2:
                continue
            w = sched.weight(slot)
            for summed in _successive_sums(pool_list, cap, npts):
                fresh.add(tuple(v / w for v in summed))
        before = len(pool)
        pool |= fresh
        pool = _prune_same_span(pool)
        if len(pool) == before and fresh <= pool:
            break
    # final prune: for evaluation only full domination matters
    final = [p for p in pool
             if not any(q != p and all(a <= b for a, b in zip(p, q))
                        for q in pool)]
    return sorted(final)


def oracle_norm(x: Vec00, sched: ParamSchedule, depth: int, *,
                arity_factor: int = 1) -> Fraction:
    """Independent evaluation of the same norm by profile closure."""
    if x.is_zero():
        return Fraction(0)
    mags = tuple(abs(c) for _, c in x.entries)
    profiles = norming_profiles(len(mags), sched, depth,
                                arity_factor=arity_factor)
    return max(sum((p * m for p, m in zip(prof, mags)), Fraction(0))
               for prof in profiles)


# ---------------------------------------------------------------------------
# Oracle 2: literal streaming of functional trees over a fixed universe.

def norming_enumerate(universe: Sequence[Ordinal], sched: ParamSchedule,
                      depth: int, *, budget: Optional[int] = None,
                      slots: Optional[Sequence[int]] = None
                      ) -> Iterator[Functional]:
    """Stream the norming family over the given coordinates: signed leaves,
    then height-by-height all admissible weighted combinations.  Purely
    definitional; exponential, meant for tiny universes and spot audits.
    `slots` restricts the weights used (e.g. even slots only)."""
    emitted = 0
    use_slots = list(sched.slots()) if slots is None else list(slots)

    def _bump() -> bool:
        nonlocal emitted
        emitted += 1
        return budget is not None and emitted >= budget

    levels: list[list[Functional]] = [[]]
    for idx in universe:
        for sign in (1, -1):
            leaf = FLeaf(sign, idx)
            levels[0].append(leaf)
            yield leaf
            if _bump():
                return
    for _ in range(depth):
        prev = [f for lv in levels for f in lv]
        nxt: list[Functional] = []
        for slot in use_slots:
            cap = sched.arity(slot)
            w = sched.weight(slot)
            for seq in _successive_trees(prev, cap):
                f = FCombine(slot, w, tuple(seq))
                nxt.append(f)
                yield f
                if _bump():
                    return
        levels.append(nxt)


def _successive_trees(pool: Sequence[Functional],
                      max_parts: int) -> Iterator[list[Functional]]:
    items = [(f.vector.range_hull(), f) for f in pool if not f.vector.is_zero()]
    items.sort(key=lambda t: (t[0][0], t[0][1]))

    def extend(acc: list[Functional], min_lo: Ordinal | None,
               parts_left: int) -> Iterator[list[Functional]]:
        for (lo, hi), f in items:
            if min_lo is not None and lo <= min_lo:
                continue
            cur = acc + [f]
            if len(cur) >= 2:
                yield cur
            if parts_left > 1:
                yield from extend(cur, hi, parts_left - 1)

    yield from extend([], None, max_parts)
