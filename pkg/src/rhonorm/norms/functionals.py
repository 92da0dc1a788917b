"""Norming functionals as finite trees.

Three node kinds:
  * FLeaf       -- a signed evaluation functional +-e*_alpha;
  * FCombine    -- (1/m_j) times a sum of successive children (type I);
  * FConvex     -- a rational sub-convex combination (type II).

A functional's action on a vector goes through its exact Vec00 coefficient
profile, so every evaluation is a rational dot product.  Structural
validation against a schedule lives here too: arities, successiveness,
weights, convexity and range nesting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Union

from ..ordinals import Ordinal
from ..vectors import Vec00, basis_vector, successive
from .schedules import ParamSchedule


@dataclass(frozen=True)
class FLeaf:
    sign: int
    idx: Ordinal

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("leaf sign must be +-1")

    @cached_property
    def vector(self) -> Vec00:
        return basis_vector(self.idx, Fraction(self.sign))


@dataclass(frozen=True)
class FCombine:
    """(1/m_slot) * (child_1 + ... + child_d), children successive."""

    slot: int
    weight: int
    children: tuple["Functional", ...]
    special: Optional[tuple] = None  # opaque tag attached by the coding layer

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("combine node needs at least one child")
        if self.weight < 2:
            raise ValueError("combine weight must be >= 2")

    @cached_property
    def vector(self) -> Vec00:
        acc = self.children[0].vector
        for ch in self.children[1:]:
            acc = acc + ch.vector
        return acc.scale(Fraction(1, self.weight))


@dataclass(frozen=True)
class FConvex:
    parts: tuple[tuple[Fraction, "Functional"], ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("convex node needs at least one part")

    @cached_property
    def vector(self) -> Vec00:
        acc = Vec00(())
        for coeff, f in self.parts:
            acc = acc + f.vector.scale(coeff)
        return acc


Functional = Union[FLeaf, FCombine, FConvex]


def evaluate(f: Functional, x: Vec00) -> Fraction:
    return f.vector.dot(x)


def weight_of(f: Functional) -> Optional[int]:
    """The m-weight of a type I node, None for other kinds."""
    return f.weight if isinstance(f, FCombine) else None


def negate(f: Functional) -> Functional:
    if isinstance(f, FLeaf):
        return FLeaf(-f.sign, f.idx)
    if isinstance(f, FCombine):
        return FCombine(f.slot, f.weight, tuple(negate(c) for c in f.children),
                        special=f.special)
    return FConvex(tuple((q, negate(p)) for q, p in f.parts))


def restrict_interval(f: Functional, lo: Ordinal, hi: Ordinal) -> Optional[Functional]:
    """E.f for the ordinal interval E = [lo, hi]; None when the trace dies."""
    if isinstance(f, FLeaf):
        return f if lo <= f.idx <= hi else None
    if isinstance(f, FCombine):
        kept = tuple(c for c in (restrict_interval(ch, lo, hi) for ch in f.children)
                     if c is not None)
        if not kept:
            return None
        return FCombine(f.slot, f.weight, kept, special=f.special)
    kept_parts = []
    for q, p in f.parts:
        rp = restrict_interval(p, lo, hi)
        if rp is not None:
            kept_parts.append((q, rp))
    return FConvex(tuple(kept_parts)) if kept_parts else None


def restrict_set(f: Functional, allowed: frozenset[Ordinal]) -> Optional[Functional]:
    """A.f for an arbitrary coordinate set A (the unconditional variant)."""
    if isinstance(f, FLeaf):
        return f if f.idx in allowed else None
    if isinstance(f, FCombine):
        kept = tuple(c for c in (restrict_set(ch, allowed) for ch in f.children)
                     if c is not None)
        if not kept:
            return None
        return FCombine(f.slot, f.weight, kept, special=f.special)
    kept_parts = []
    for q, p in f.parts:
        rp = restrict_set(p, allowed)
        if rp is not None:
            kept_parts.append((q, rp))
    return FConvex(tuple(kept_parts)) if kept_parts else None


def iter_nodes(f: Functional) -> Iterator[Functional]:
    yield f
    if isinstance(f, FCombine):
        for ch in f.children:
            yield from iter_nodes(ch)
    elif isinstance(f, FConvex):
        for _, p in f.parts:
            yield from iter_nodes(p)


def validate_tree(f: Functional, sched: ParamSchedule, *,
                  allow_convex: bool = True,
                  odd_slots_need_tag: bool = False) -> list[str]:
    """Structural audit of a functional tree against a schedule.

    Returns a list of human-readable violations (empty means valid):
      - type I slots must exist in the schedule and carry its weight;
      - type I children must be pairwise successive and at most n_j many;
      - type II coefficients must be positive rationals summing to <= 1;
      - child ranges must sit inside the parent's range hull.
    With odd_slots_need_tag, untagged odd-slot combines are flagged (they
    claim to be special functionals but carry no coding certificate).
    """
    problems: list[str] = []
    _validate(f, sched, problems, allow_convex, odd_slots_need_tag, path="f")
    return problems


def _validate(f: Functional, sched: ParamSchedule, problems: list[str],
              allow_convex: bool, odd_tag: bool, path: str) -> None:
    if isinstance(f, FLeaf):
        return
    if isinstance(f, FConvex):
        if not allow_convex:
            problems.append(f"{path}: convex node not allowed in this family")
        total = Fraction(0)
        for i, (q, p) in enumerate(f.parts):
            if q <= 0:
                problems.append(f"{path}.part[{i}]: coefficient {q} not positive")
            total += q
            _validate(p, sched, problems, allow_convex, odd_tag, f"{path}.part[{i}]")
        if total > 1:
            problems.append(f"{path}: convex coefficients sum to {total} > 1")
        return
    # FCombine
    if not 1 <= f.slot <= len(sched):
        problems.append(f"{path}: slot {f.slot} outside schedule")
    else:
        if f.weight != sched.weight(f.slot):
            problems.append(
                f"{path}: weight {f.weight} != schedule weight "
                f"{sched.weight(f.slot)} at slot {f.slot}")
        if len(f.children) > sched.arity(f.slot):
            problems.append(
                f"{path}: {len(f.children)} children exceed arity "
                f"{sched.arity(f.slot)} at slot {f.slot}")
        if odd_tag and f.slot % 2 == 1 and f.special is None:
            problems.append(f"{path}: odd slot {f.slot} without a coding tag")
    vecs = [c.vector for c in f.children]
    if any(v.is_zero() for v in vecs):
        problems.append(f"{path}: child with empty trace")
    elif not successive(*vecs):
        problems.append(f"{path}: children not successive")
    hull = f.vector
    if not hull.is_zero():
        lo, hi = hull.range_hull()
        for i, v in enumerate(vecs):
            if v.is_zero():
                continue
            clo, chi = v.range_hull()
            if clo < lo or chi > hi:
                problems.append(f"{path}.child[{i}]: range escapes parent hull")
    for i, ch in enumerate(f.children):
        _validate(ch, sched, problems, allow_convex, odd_tag, f"{path}.child[{i}]")


def flag_audit(f: Functional) -> dict[str, int]:
    """Count node kinds; used by reports to show what a witness is made of."""
    counts = {"leaf": 0, "combine": 0, "convex": 0, "tagged": 0}
    for node in iter_nodes(f):
        if isinstance(node, FLeaf):
            counts["leaf"] += 1
        elif isinstance(node, FCombine):
            counts["combine"] += 1
            if node.special is not None:
                counts["tagged"] += 1
        else:
            counts["convex"] += 1
    return counts


def render_functional(f: Functional) -> str:
    from ..ordinals import render
    if isinstance(f, FLeaf):
        s = "+" if f.sign > 0 else "-"
        return f"{s}e[{render(f.idx)}]"
    if isinstance(f, FCombine):
        inner = " + ".join(render_functional(c) for c in f.children)
        tag = "*" if f.special is not None else ""
        return f"(1/{f.weight}){tag}({inner})"
    inner = " + ".join(f"{q}*{render_functional(p)}" for q, p in f.parts)
    return f"conv({inner})"
