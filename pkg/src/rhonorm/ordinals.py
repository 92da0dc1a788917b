"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a finite sum  w^e_1 * c_1 + ... + w^e_k * c_k  with ordinal
exponents e_1 > ... > e_k and integer coefficients c_i >= 1.  Natural numbers
are the sums with a single exponent-0 term.  The representation is unique,
hashable and totally ordered, so ordinals can serve as vector indices and
dictionary keys everywhere else in the package.

Text form (ASCII):  term ("+" term)*  with

    term := "w^" exp ["*" posint] | "w" ["*" posint] | nonnegint
    exp  := nonnegint | "w" ["^" exp]

"w" abbreviates "w^1", a coefficient of 1 is omitted, terms appear in strictly
decreasing exponent order.  Exponents in text form are atoms (no sums or
coefficients inside an exponent); the data model is not so restricted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable


class OrdinalParseError(ValueError):
    """Raised on malformed ordinal literals; carries the byte offset."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """Cantor normal form: tuple of (exponent, coefficient) pairs."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal) or not isinstance(coeff, int):
                raise TypeError("terms must be (Ordinal, int) pairs")
            if coeff < 1:
                raise ValueError("coefficients must be >= 1")
            if prev is not None and not exp < prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    # -- ordering ---------------------------------------------------------

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._key() < other._key()

    def _key(self) -> tuple:
        return tuple((exp._key(), coeff) for exp, coeff in self.terms)

    def __hash__(self) -> int:
        return hash(self._key())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_natural(self) -> bool:
        """True for 0, 1, 2, ... (finite ordinals)."""
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def as_natural(self) -> int:
        if not self.is_natural():
            raise ValueError(f"{self} is not a natural number")
        return self.terms[0][1] if self.terms else 0

    def natural_part(self) -> int:
        """The coefficient of w^0, i.e. k in alpha = lambda + k."""
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    def limit_part(self) -> "Ordinal":
        """The largest limit (or zero) ordinal <= self."""
        if self.terms and self.terms[-1][0].is_zero():
            return Ordinal(self.terms[:-1])
        return self

    def is_successor(self) -> bool:
        return self.natural_part() > 0

    def is_limit(self) -> bool:
        """Limit in the wide sense used here: not a successor (0 counts)."""
        return not self.is_successor()

    def pred(self) -> "Ordinal":
        """alpha - 1 for successor alpha."""
        if not self.is_successor():
            raise ValueError(f"{self} is not a successor")
        head, (exp, coeff) = self.terms[:-1], self.terms[-1]
        if coeff == 1:
            return Ordinal(head)
        return Ordinal(head + ((exp, coeff - 1),))

    def limit_pred(self) -> "Ordinal":
        """The beta with alpha = beta + w; error if alpha is not of that form."""
        if not self.terms:
            raise ValueError("0 has no limit predecessor")
        if self.is_successor():
            raise ValueError(f"{self} is a successor, not of the form beta + w")
        exp, coeff = self.terms[-1]
        if exp != ONE:
            raise ValueError(f"{self} is not of the form beta + w")
        head = self.terms[:-1]
        if coeff == 1:
            return Ordinal(head)
        return Ordinal(head + ((exp, coeff - 1),))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Ordinal") -> "Ordinal":
        if not isinstance(other, Ordinal):
            return NotImplemented
        if not other.terms:
            return self
        lead_exp, lead_coeff = other.terms[0]
        kept = [t for t in self.terms if t[0] > lead_exp]
        merged: list[tuple[Ordinal, int]]
        if len(kept) < len(self.terms) and self.terms[len(kept)][0] == lead_exp:
            merged = kept + [(lead_exp, self.terms[len(kept)][1] + lead_coeff)]
        else:
            merged = kept + [(lead_exp, lead_coeff)]
        return Ordinal(tuple(merged) + other.terms[1:])

    def succ(self) -> "Ordinal":
        return self + ONE

    def __repr__(self) -> str:
        return f"Ordinal[{render(self)}]"

    def __str__(self) -> str:
        return render(self)


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    if n == 0:
        return ZERO
    return Ordinal(((ZERO, n),))


def omega_power(exp: Ordinal, coeff: int = 1) -> Ordinal:
    return Ordinal(((exp, coeff),))


ZERO = Ordinal()
ONE = from_int(1)
OMEGA = omega_power(ONE)


def omega_times(k: int, offset: int = 0) -> Ordinal:
    """Convenience for w*k + offset."""
    base = omega_power(ONE, k) if k else ZERO
    return base + from_int(offset) if offset else base


def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1."""
    if a < b:
        return -1
    if b < a:
        return 1
    return 0


# -- ladders ---------------------------------------------------------------


def ladder_entry(lam: Ordinal, i: int) -> Ordinal:
    """The i-th entry (i >= 0) of the canonical cofinal sequence of lam.

    For lam = gamma + w the sequence is gamma, gamma+1, gamma+2, ...
    For lam a limit of limits it is an increasing sequence of limit ordinals:
    mu + w^e collapses to mu + w^(e-1)*(i+1) for successor exponent e, and to
    mu + w^(e_i + 1) along the exponent's own sequence otherwise.
    """
    if not lam.is_limit() or lam.is_zero():
        raise ValueError(f"{lam} is not a nonzero limit")
    exp, coeff = lam.terms[-1]
    mu = Ordinal(lam.terms[:-1])
    if coeff > 1:
        mu = mu + omega_power(exp, coeff - 1)
    if exp == ONE:
        return mu + from_int(i)
    if exp.is_successor():
        return mu + omega_power(exp.pred(), i + 1)
    return mu + omega_power(ladder_entry(exp, i) + ONE)


def ladder_prefix(lam: Ordinal, below: Ordinal) -> list[Ordinal]:
    """All canonical ladder entries of lam that are < below (finite list)."""
    out: list[Ordinal] = []
    i = 0
    while True:
        c = ladder_entry(lam, i)
        if not c < below:
            return out
        out.append(c)
        i += 1


def ladder_next(lam: Ordinal, alpha: Ordinal) -> tuple[int, Ordinal]:
    """(number of ladder entries < alpha, least entry >= alpha)."""
    i = 0
    while True:
        c = ladder_entry(lam, i)
        if not c < alpha:
            return i, c
        i += 1


# -- order isomorphism -----------------------------------------------------


def order_iso(f: Iterable[Ordinal], g: Iterable[Ordinal]) -> dict[Ordinal, Ordinal]:
    """The unique order isomorphism between two finite sets of equal size."""
    fs, gs = sorted(set(f)), sorted(set(g))
    if len(fs) != len(gs):
        raise ValueError(f"sets have sizes {len(fs)} != {len(gs)}")
    return dict(zip(fs, gs))


# -- text form -------------------------------------------------------------


def render(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero():
            parts.append(str(coeff))
        else:
            head = "w" if exp == ONE else "w^" + _render_exp_atom(exp)
            parts.append(head if coeff == 1 else f"{head}*{coeff}")
    return "+".join(parts)


def _render_exp_atom(e: Ordinal) -> str:
    if e.is_natural():
        return str(e.as_natural())
    if len(e.terms) == 1 and e.terms[0][1] == 1:
        inner = e.terms[0][0]
        return "w" if inner == ONE else "w^" + _render_exp_atom(inner)
    raise ValueError(f"exponent {e.terms} has no atomic text form")


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str) -> OrdinalParseError:
        return OrdinalParseError(message, self.pos)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a digit")
        lit = self.text[start : self.pos]
        if len(lit) > 1 and lit[0] == "0":
            self.pos = start
            raise self.error("leading zeros are not allowed")
        return int(lit)

    def parse_exp_atom(self) -> Ordinal:
        if self.peek().isdigit():
            return from_int(self.take_int())
        if self.peek() == "w":
            self.pos += 1
            if self.peek() == "^":
                self.pos += 1
                return omega_power(self.parse_exp_atom())
            return OMEGA
        raise self.error("expected an exponent (integer or w)")

    def parse_term(self) -> tuple[Ordinal, int]:
        if self.peek().isdigit():
            n = self.take_int()
            return ZERO, n
        if self.peek() != "w":
            raise self.error("expected a term (integer or w)")
        self.pos += 1
        exp = ONE
        if self.peek() == "^":
            self.pos += 1
            exp = self.parse_exp_atom()
        coeff = 1
        if self.peek() == "*":
            self.pos += 1
            coeff = self.take_int()
            if coeff < 1:
                raise self.error("coefficient must be positive")
        return exp, coeff

    def parse(self) -> Ordinal:
        exp, coeff = self.parse_term()
        if exp.is_zero() and coeff == 0:
            if self.pos != len(self.text):
                raise self.error("trailing input after 0")
            return ZERO
        terms = [(exp, coeff)]
        while self.peek() == "+":
            self.pos += 1
            exp, coeff = self.parse_term()
            if exp.is_zero() and coeff == 0:
                raise self.error("0 cannot appear as a summand")
            if not exp < terms[-1][0]:
                raise self.error("exponents must strictly decrease")
            terms.append((exp, coeff))
        if self.pos != len(self.text):
            raise self.error(f"unexpected character {self.peek()!r}")
        return Ordinal(tuple(terms))


def parse(text: str) -> Ordinal:
    """Parse the ASCII form; raises OrdinalParseError with a byte offset."""
    if not text:
        raise OrdinalParseError("empty ordinal literal", 0)
    return _Parser(text).parse()
