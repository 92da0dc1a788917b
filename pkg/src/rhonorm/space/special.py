"""Special sequences: chains of weighted functionals whose successive
weights are dictated by the sigma coding, and the tree-like interference
checker for pairs of such chains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from ..ordinals import Ordinal, from_int
from ..reports import CheckReport, Waiver
from ..rho import RhoFn, closure, p_of
from ..norms.functionals import FCombine, FLeaf, Functional, weight_of
from ..norms.schedules import ParamSchedule
from ..vectors import successive
from .coding import CodingError, CodingState, QsEntry, record_waiver, sigma_rho

PhiSource = Callable[[int], Functional]


class BlockAllocator:
    """Hands out runs of fresh natural coordinates, strictly increasing."""

    def __init__(self, start: int = 0) -> None:
        self._next = start

    @property
    def cursor(self) -> int:
        return self._next

    def take(self, k: int) -> tuple[Ordinal, ...]:
        if k <= 0:
            raise ValueError("need a positive run length")
        pts = tuple(from_int(self._next + i) for i in range(k))
        self._next += k
        return pts


def canonical_phi_source(sched: ParamSchedule,
                         alloc: BlockAllocator) -> PhiSource:
    """Flat unit functionals: slot s maps to (1/m_s) over n_s fresh points."""
    def source(slot: int) -> Functional:
        pts = alloc.take(sched.arity(slot))
        return FCombine(slot, sched.weight(slot),
                        tuple(FLeaf(1, p) for p in pts))
    return source


def replaying_source(prefix: Sequence[Functional],
                     then: PhiSource) -> PhiSource:
    """Replay the given functionals first, then delegate.  This is how a
    chain sharing k steps with an existing one is built: the sigma registry
    returns the recorded codes for the replayed prefixes and assigns fresh
    ones after the divergence."""
    state = {"i": 0}

    def source(slot: int) -> Functional:
        i = state["i"]
        if i < len(prefix):
            state["i"] = i + 1
            return prefix[i]
        return then(slot)

    return source


@dataclass(frozen=True)
class SpecialSequence:
    """A built chain.  p_seq holds the p's actually used in coding queries,
    so it is one shorter than the chain itself."""

    phis: tuple[Functional, ...]
    slots: tuple[int, ...]
    weights: tuple[int, ...]
    p_seq: tuple[int, ...]
    odd_slot: int
    coding_root: str
    mode: str
    waivers: tuple[Waiver, ...] = ()

    def __post_init__(self) -> None:
        if not (len(self.phis) == len(self.slots) == len(self.weights)):
            raise ValueError("chain fields disagree on length")
        if len(self.p_seq) != max(0, len(self.phis) - 1):
            raise ValueError("p_seq must cover exactly the coded prefixes")
        if self.odd_slot % 2 == 0:
            raise ValueError("target slot must be odd")

    @property
    def length(self) -> int:
        return len(self.phis)

    def entries(self, upto: Optional[int] = None) -> tuple[QsEntry, ...]:
        k = len(self.p_seq) if upto is None else upto
        return tuple(QsEntry(self.phis[i], self.weights[i], self.p_seq[i])
                     for i in range(k))

    def finale(self, sched: ParamSchedule) -> FCombine:
        """The weighted sum (1/m) over the whole chain at the odd slot."""
        if self.length > sched.arity(self.odd_slot):
            raise ValueError("chain longer than the odd slot's arity")
        return FCombine(self.odd_slot, sched.weight(self.odd_slot), self.phis,
                        special=("chain", self.coding_root, self.length))


def build_special_sequence(source: PhiSource, odd_slot: int,
                           sched: ParamSchedule, rho: RhoFn,
                           coding: CodingState, *,
                           length: Optional[int] = None,
                           start_slot: Optional[int] = None
                           ) -> SpecialSequence:
    """Grow a chain for the given odd slot: the first element comes from a
    start slot 2j1 with j1 even, every later weight index is the sigma code
    of the preceding prefix.  Strict mode insists on the start inequality
    m_start > n_odd^2; toy mode records the waiver and carries on."""
    if odd_slot % 2 == 0:
        raise ValueError("special sequences target an odd weight index")
    sched.weight(odd_slot)
    n_target = sched.arity(odd_slot)
    if length is None:
        length = n_target
    if not 1 <= length <= n_target:
        raise ValueError(f"length {length} outside 1..{n_target}")
    if start_slot is None:
        start_slot = 4
    if start_slot % 4 != 0:
        raise ValueError("start slot must be 2 j1 with j1 even")
    w0 = sched.weight(start_slot)
    wa0 = len(coding.waivers)
    if not w0 > n_target ** 2:
        msg = (f"start weight m_{start_slot} = {w0} is not above "
               f"n_{odd_slot}^2 = {n_target ** 2}")
        if coding.mode == "strict":
            raise CodingError(msg)
        record_waiver(coding, "start-gate", msg)

    phis: list[Functional] = []
    slots: list[int] = []
    weights: list[int] = []
    ps: list[int] = []
    acc_supp: list[Ordinal] = []
    slot = start_slot
    for i in range(length):
        phi = source(slot)
        if weight_of(phi) != sched.weight(slot):
            raise ValueError(f"source produced weight {weight_of(phi)} "
                             f"where slot {slot} demands "
                             f"{sched.weight(slot)}")
        if phis and not successive(phis[-1].vector, phi.vector):
            raise ValueError("source blocks must be successive")
        phis.append(phi)
        slots.append(slot)
        weights.append(sched.weight(slot))
        acc_supp.extend(idx for idx, _ in phi.vector.entries)
        prev = ps[-1] if ps else 0
        ps.append(max(prev + 1, p_of(rho, acc_supp)))
        if i + 1 < length:
            prefix = tuple(QsEntry(phis[k], weights[k], ps[k])
                           for k in range(i + 1))
            slot = sigma_rho(prefix, coding, rho)
    return SpecialSequence(
        phis=tuple(phis), slots=tuple(slots), weights=tuple(weights),
        p_seq=tuple(ps[:-1]), odd_slot=odd_slot,
        coding_root=coding.root_id, mode=coding.mode,
        waivers=tuple(coding.waivers[wa0:]))


def _closure_pool(seq: SpecialSequence, lam: int,
                  rho: RhoFn) -> frozenset[Ordinal]:
    """p-closure of the first lam-1 supports, at that prefix's own p."""
    pool = [idx for k in range(lam - 1)
            for idx, _ in seq.phis[k].vector.entries]
    return frozenset(closure(rho, pool, seq.p_seq[lam - 2]))


def tree_interference(a: SpecialSequence, b: SpecialSequence,
                      rho: RhoFn) -> tuple[int, int, CheckReport]:
    """The interference indices (kappa, lambda) of two chains and the four
    clauses checked on them: matching weights and p's up to lambda,
    identical elements strictly before kappa, closure-disjoint supports
    strictly between, and disjoint tail weights."""
    if a.coding_root != b.coding_root:
        raise ValueError("chains come from unrelated coding states")
    lam = max((i for i in range(1, min(a.length, b.length) + 1)
               if a.weights[i - 1] == b.weights[i - 1]), default=0)
    kappa = 0
    for i in range(1, lam):
        if a.phis[i - 1] != b.phis[i - 1]:
            kappa = i
            break

    tp1_w = [i for i in range(1, lam + 1)
             if a.weights[i - 1] != b.weights[i - 1]]
    # The p's are pinned only through lam-1: the key behind the last
    # agreeing weight carries p_1..p_{lam-1}, while p_lam is each chain's
    # own later choice.
    pl = min(lam - 1, len(a.p_seq), len(b.p_seq))
    tp1_p = [i for i in range(1, pl + 1) if a.p_seq[i - 1] != b.p_seq[i - 1]]

    tp2_bad = [i for i in range(1, kappa) if a.phis[i - 1] != b.phis[i - 1]]

    tp3_bad: list[list] = []
    if kappa > 0 and lam >= 2:
        pool_b = _closure_pool(b, lam, rho)
        pool_a = _closure_pool(a, lam, rho)
        for i in range(kappa + 1, lam):
            if {idx for idx, _ in a.phis[i - 1].vector.entries} & pool_b:
                tp3_bad.append(["phi", i])
            if {idx for idx, _ in b.phis[i - 1].vector.entries} & pool_a:
                tp3_bad.append(["psi", i])

    tp4_bad = sorted(set(a.weights[lam:]) & set(b.weights))
    tp4_bad += sorted(set(b.weights[lam:]) & set(a.weights))

    rows = {
        "tp1": {"ok": not tp1_w and not tp1_p,
                "weight_mismatch": tp1_w, "p_mismatch": tp1_p},
        "tp2": {"ok": not tp2_bad, "mismatch": tp2_bad},
        "tp3": {"ok": not tp3_bad, "vacuous": kappa == 0,
                "hits": tp3_bad},
        "tp4": {"ok": not tp4_bad, "shared_weights": tp4_bad},
    }
    report = CheckReport(
        name="tree-interference",
        ok=all(row["ok"] for row in rows.values()),
        details={"kappa": kappa, "lambda": lam,
                 "slots": [list(a.slots), list(b.slots)], **rows},
        waivers=list(a.waivers) + [w for w in b.waivers
                                   if w not in a.waivers],
    )
    return kappa, lam, report
