"""The coding layer behind special sequences.

A Q_s tuple is a finite sequence of (functional, weight, p) triples with
successive supports and strictly increasing weights and p's.  The sigma
assignment collapses each tuple onto its p-closed hull (so tuples whose
hulls are order-isomorphic with matching transported functionals share a
code), then hands out indices from {2, 6, 10, ...} injectively, in query
order.  Strict mode also enforces the growth inequality on fresh codes;
toy mode records a waiver instead, which is the only way to run chains on
desk-sized schedules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..ordinals import Ordinal, from_int
from ..reports import Waiver, dumps
from ..rho import RhoFn, closure, p_of
from ..norms.functionals import (FCombine, FConvex, FLeaf, Functional,
                                 render_functional, weight_of)
from ..vectors import collapse_positions, successive


class CodingError(ValueError):
    pass


class ScheduleExhausted(CodingError):
    """sigma needs a weight index beyond the end of the schedule."""


@dataclass(frozen=True)
class QsEntry:
    phi: Functional
    weight: int
    p: int


def qs_problems(entries: Sequence[QsEntry], rho: RhoFn) -> list[str]:
    """Everything wrong with the tuple as a Q_s element, in reading order."""
    problems: list[str] = []
    if not entries:
        return ["empty tuple"]
    for k, e in enumerate(entries, start=1):
        if e.phi.vector.is_zero():
            problems.append(f"element {k} has empty support")
            continue
        w = weight_of(e.phi)
        if w is None:
            problems.append(f"element {k} carries no weight")
        elif w != e.weight:
            problems.append(f"element {k}: declared weight {e.weight}, "
                            f"tree weight {w}")
    if not problems and not successive(*(e.phi.vector for e in entries)):
        problems.append("supports are not successive")
    ws = [e.weight for e in entries]
    if any(b <= a for a, b in zip(ws, ws[1:])):
        problems.append("weights are not strictly increasing")
    ps = [e.p for e in entries]
    if any(b <= a for a, b in zip(ps, ps[1:])):
        problems.append("p's are not strictly increasing")
    acc: list[Ordinal] = []
    for k, e in enumerate(entries, start=1):
        acc.extend(idx for idx, _ in e.phi.vector.entries)
        need = p_of(rho, acc)
        if e.p < need:
            problems.append(f"p_{k} = {e.p} is below the support bound {need}")
    return problems


@dataclass(frozen=True)
class ProjectedTuple:
    """A Q_s tuple transported onto 1..#G along its closed hull G."""

    gsize: int
    phis: tuple[str, ...]          # rendered transported functionals
    weights: tuple[int, ...]
    ps: tuple[int, ...]
    eps: Fraction                  # min |phi_k(e_alpha)| over the tuple
    max_pos: int                   # max transported support of the last phi

    def key(self) -> str:
        return dumps({"g": self.gsize, "phi": list(self.phis),
                      "w": list(self.weights), "p": list(self.ps)})

    def growth_floor(self) -> Fraction:
        return max(Fraction(self.ps[-1] ** 2),
                   Fraction(1) / self.eps ** 2,
                   Fraction(self.max_pos))


def _transport(f: Functional, pi: dict[Ordinal, int]) -> Functional:
    if isinstance(f, FLeaf):
        return FLeaf(f.sign, from_int(pi[f.idx]))
    if isinstance(f, FCombine):
        return FCombine(f.slot, f.weight,
                        tuple(_transport(c, pi) for c in f.children),
                        f.special)
    assert isinstance(f, FConvex)
    return FConvex(tuple((q, _transport(g, pi)) for q, g in f.parts))


def qs_project(entries: Sequence[QsEntry], rho: RhoFn) -> ProjectedTuple:
    if not entries:
        raise CodingError("cannot project an empty tuple")
    union: set[Ordinal] = set()
    eps: Optional[Fraction] = None
    for e in entries:
        if e.phi.vector.is_zero():
            raise CodingError("cannot project a tuple element with empty "
                              "support")
        for idx, c in e.phi.vector.entries:
            union.add(idx)
            a = abs(c)
            if eps is None or a < eps:
                eps = a
    assert eps is not None
    g = closure(rho, sorted(union), entries[-1].p)
    pi = collapse_positions(g)
    phis = tuple(render_functional(_transport(e.phi, pi)) for e in entries)
    last = entries[-1].phi.vector
    return ProjectedTuple(
        gsize=len(g),
        phis=phis,
        weights=tuple(e.weight for e in entries),
        ps=tuple(e.p for e in entries),
        eps=eps,
        max_pos=max(pi[idx] for idx, _ in last.entries),
    )


@dataclass
class CodingState:
    """Single-writer registry for sigma.  Fork before any concurrent or
    adversarial use; forks keep the root marker so descendants remain
    comparable while their fresh assignments diverge."""

    mode: str = "toy"
    max_slot: Optional[int] = None
    registry: dict[str, int] = field(default_factory=dict)
    waivers: list[Waiver] = field(default_factory=list)
    lineage: tuple[str, ...] = ("root",)

    def __post_init__(self) -> None:
        if self.mode not in ("strict", "toy"):
            raise CodingError(f"unknown coding mode {self.mode!r}")

    @property
    def root_id(self) -> str:
        return self.lineage[0]

    def fork(self, tag: str) -> "CodingState":
        return CodingState(mode=self.mode, max_slot=self.max_slot,
                           registry=dict(self.registry),
                           waivers=list(self.waivers),
                           lineage=self.lineage + (tag,))


def record_waiver(coding: CodingState, code: str, detail: str) -> None:
    w = Waiver(code, detail)
    if w not in coding.waivers:
        coding.waivers.append(w)


def sigma_rho(entries: Sequence[QsEntry], coding: CodingState,
              rho: RhoFn) -> int:
    """The coded weight index of the tuple: registry lookup, else the next
    free element of {2, 6, 10, ...} (strict mode skips ahead until the
    growth inequality holds)."""
    entries = tuple(entries)
    problems = qs_problems(entries, rho)
    if problems:
        if coding.mode == "strict":
            raise CodingError("not a Q_s tuple: " + "; ".join(problems))
        record_waiver(coding, "qs-shape", "; ".join(problems))
    proj = qs_project(entries, rho)
    key = proj.key()
    got = coding.registry.get(key)
    if got is not None:
        return got
    floor = proj.growth_floor()
    used = set(coding.registry.values())
    value = 2
    if coding.mode == "strict":
        while value in used or Fraction(value) <= floor:
            value += 4
    else:
        while value in used:
            value += 4
        if Fraction(value) <= floor:
            record_waiver(coding, "sigma-growth",
                          f"assigned index {value} at or below the growth "
                          f"floor {floor}")
    if coding.max_slot is not None and value > coding.max_slot:
        raise ScheduleExhausted(f"sigma needs weight index {value}, "
                                f"schedule ends at {coding.max_slot}")
    coding.registry[key] = value
    return value
