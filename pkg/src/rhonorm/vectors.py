"""Finitely supported rational vectors indexed by ordinals (c00 over the
ordinal grid), with the interval/restriction algebra the norming sets use.

All coefficients are fractions.Fraction; nothing in the package ever goes
through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ordinals import Ordinal, OrdinalParseError, parse as parse_ordinal, render as render_ordinal

Rat = Fraction


def format_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rat(text: str, offset: int = 0) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise OrdinalParseError(f"bad rational {text!r} ({exc})", offset) from None


@dataclass(frozen=True)
class Vec00:
    """Immutable sparse vector; entries sorted by index, zeros dropped."""

    entries: tuple[tuple[Ordinal, Fraction], ...] = ()

    @staticmethod
    def make(data: Mapping[Ordinal, Fraction] | Iterable[tuple[Ordinal, Fraction]]) -> "Vec00":
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict[Ordinal, Fraction] = {}
        for idx, val in items:
            acc[idx] = acc.get(idx, Fraction(0)) + Fraction(val)
        return Vec00(tuple(sorted((i, v) for i, v in acc.items() if v != 0)))

    def support(self) -> tuple[Ordinal, ...]:
        return tuple(i for i, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __getitem__(self, idx: Ordinal) -> Fraction:
        for i, v in self.entries:
            if i == idx:
                return v
        return Fraction(0)

    def min_support(self) -> Ordinal:
        if not self.entries:
            raise ValueError("zero vector has no support")
        return self.entries[0][0]

    def max_support(self) -> Ordinal:
        if not self.entries:
            raise ValueError("zero vector has no support")
        return self.entries[-1][0]

    def range_hull(self) -> tuple[Ordinal, Ordinal]:
        """Smallest closed interval [min supp, max supp] containing the support."""
        return self.min_support(), self.max_support()

    def restrict(self, lo: Ordinal, hi: Ordinal) -> "Vec00":
        """Restriction to the closed interval [lo, hi]."""
        return Vec00(tuple((i, v) for i, v in self.entries if lo <= i <= hi))

    def restrict_set(self, allowed: Iterable[Ordinal]) -> "Vec00":
        allowed = set(allowed)
        return Vec00(tuple((i, v) for i, v in self.entries if i in allowed))

    def __add__(self, other: "Vec00") -> "Vec00":
        return Vec00.make(list(self.entries) + list(other.entries))

    def __sub__(self, other: "Vec00") -> "Vec00":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "Vec00":
        c = Fraction(c)
        if c == 0:
            return Vec00()
        return Vec00(tuple((i, v * c) for i, v in self.entries))

    def abs(self) -> "Vec00":
        return Vec00(tuple((i, abs(v)) for i, v in self.entries))

    def sup_norm(self) -> Fraction:
        return max((abs(v) for _, v in self.entries), default=Fraction(0))

    def l1_norm(self) -> Fraction:
        return sum((abs(v) for _, v in self.entries), Fraction(0))

    def dot(self, other: "Vec00") -> Fraction:
        small, big = (self, other) if len(self.entries) <= len(other.entries) else (other, self)
        lookup = dict(big.entries)
        return sum((v * lookup[i] for i, v in small.entries if i in lookup), Fraction(0))

    def __str__(self) -> str:
        return render_vector(self)

    def __repr__(self) -> str:
        return f"Vec00[{render_vector(self)}]"


def basis_vector(idx: Ordinal, coeff: Fraction = Fraction(1)) -> Vec00:
    return Vec00.make([(idx, coeff)])


def successive(*vectors: Vec00) -> bool:
    """True when each vector's support lies strictly before the next one's."""
    prev_max: Ordinal | None = None
    for v in vectors:
        if v.is_zero():
            raise ValueError("successiveness is about nonzero vectors")
        if prev_max is not None and not prev_max < v.min_support():
            return False
        prev_max = v.max_support()
    return True


def supports_disjoint(a: Vec00, b: Vec00) -> bool:
    return not set(a.support()) & set(b.support())


# -- text form -------------------------------------------------------------


def render_vector(x: Vec00) -> str:
    return ",".join(f"{render_ordinal(i)}:{format_rat(v)}" for i, v in x.entries)


def parse_vector(text: str) -> Vec00:
    """Parse "idx:val,idx:val" with ordinal indices and rational values."""
    if not text.strip():
        return Vec00()
    entries: list[tuple[Ordinal, Fraction]] = []
    offset = 0
    for chunk in text.split(","):
        piece = chunk.strip()
        sub = offset + chunk.index(piece) if piece else offset
        if ":" not in piece:
            raise OrdinalParseError("expected idx:value", sub)
        idx_text, val_text = piece.split(":", 1)
        try:
            idx = parse_ordinal(idx_text)
        except OrdinalParseError as exc:
            raise OrdinalParseError(f"bad index {idx_text!r}", sub + exc.offset) from None
        val = parse_rat(val_text, sub + len(idx_text) + 1)
        entries.append((idx, val))
        offset += len(chunk) + 1
    return Vec00.make(entries)


def collapse_positions(support: Sequence[Ordinal]) -> dict[Ordinal, int]:
    """Order-collapse a finite support onto positions 1..n."""
    return {idx: pos + 1 for pos, idx in enumerate(sorted(support))}
