"""Weight/arity schedules for the mixed-Tsirelson layer.

A schedule is a finite pair of integer sequences (m_1..m_J, n_1..n_J):
slot j contributes the operation "scale a sum of at most n_j successive
functionals by 1/m_j".  The canonical fast-growth schedule is produced by
schedule_paper(); everything else ("toy" schedules) is first-class but may
fail the growth side-conditions that some constructions rely on, in which
case callers record waivers instead of silently proceeding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class ParamSchedule:
    """Strictly increasing weights m and arities n, slots indexed from 1."""

    m: tuple[int, ...]
    n: tuple[int, ...]
    paper_exact: bool = False

    def __post_init__(self) -> None:
        if len(self.m) != len(self.n):
            raise ScheduleError("m and n must have the same length")
        if not self.m:
            raise ScheduleError("schedule must have at least one slot")
        for name, seq in (("m", self.m), ("n", self.n)):
            if any(v < 2 for v in seq):
                raise ScheduleError(f"{name} entries must be >= 2")
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ScheduleError(f"{name} must be strictly increasing")

    def __len__(self) -> int:
        return len(self.m)

    def slots(self) -> range:
        return range(1, len(self.m) + 1)

    def weight(self, j: int) -> int:
        if not 1 <= j <= len(self.m):
            raise ScheduleError(f"slot {j} outside schedule of length {len(self.m)}")
        return self.m[j - 1]

    def arity(self, j: int) -> int:
        if not 1 <= j <= len(self.n):
            raise ScheduleError(f"slot {j} outside schedule of length {len(self.n)}")
        return self.n[j - 1]

    def even_slots(self) -> tuple[int, ...]:
        return tuple(j for j in self.slots() if j % 2 == 0)

    def odd_slots(self) -> tuple[int, ...]:
        return tuple(j for j in self.slots() if j % 2 == 1)

    def even_subschedule(self) -> "ParamSchedule":
        """Slots (m_2, m_4, ...) repacked as a schedule of their own."""
        ev = self.even_slots()
        if not ev:
            raise ScheduleError("no even slots to repack")
        return ParamSchedule(
            m=tuple(self.m[j - 1] for j in ev),
            n=tuple(self.n[j - 1] for j in ev),
        )

    # Growth side-conditions.  Each returns the list of slots where the
    # condition fails, so callers can decide between hard error and waiver.

    def coding_gap_failures(self) -> list[tuple[int, int]]:
        """Pairs (even slot 2j1, odd slot 2j+1) with m_{2j1} <= n_{2j+1}^2.

        The special-sequence coding wants every admissible start weight to
        dominate the squared arity of every later odd slot.
        """
        bad = []
        for start in self.even_slots():
            if start % 4 != 0:
                continue
            for odd in self.odd_slots():
                if self.weight(start) <= self.arity(odd) ** 2:
                    bad.append((start, odd))
        return bad

    def cube_failures(self) -> list[int]:
        """Slots j with n_j < m_j^3 (wanted by the averaging estimates)."""
        return [j for j in self.slots() if self.arity(j) < self.weight(j) ** 3]

    def inverse_weight_sum(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.m), Fraction(0))


def schedule_paper(slots: int) -> ParamSchedule:
    """The canonical schedule: m_1=2, m_{j+1}=m_j^4; n_1=4,
    n_{j+1}=(4 n_j)^{s_j} with s_j = log2(m_{j+1}^3).  All exact integers."""
    if slots < 1:
        raise ScheduleError("need at least one slot")
    m = [2]
    n = [4]
    for _ in range(slots - 1):
        nxt_m = m[-1] ** 4
        s = 3 * (nxt_m.bit_length() - 1)  # m's are powers of two
        m.append(nxt_m)
        n.append((4 * n[-1]) ** s)
    return ParamSchedule(m=tuple(m), n=tuple(n), paper_exact=True)


_INLINE_RE = re.compile(r"^\s*m\s*=\s*([0-9,\s]+);\s*n\s*=\s*([0-9,\s]+)$")


def parse_schedule(text: str) -> ParamSchedule:
    """Parse 'paper:K', an inline 'm=2,4;n=3,5', or file contents with
    one 'm = ...' line and one 'n = ...' line."""
    text = text.strip()
    if text.startswith("paper:"):
        try:
            k = int(text[len("paper:"):])
        except ValueError as exc:
            raise ScheduleError(f"bad slot count in {text!r}") from exc
        return schedule_paper(k)
    mt = _INLINE_RE.match(text)
    if mt:
        return ParamSchedule(m=_int_list(mt.group(1)), n=_int_list(mt.group(2)))
    m_seq = n_seq = None
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScheduleError(f"unparseable schedule line {line!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if key == "m":
            m_seq = _int_list(rhs)
        elif key == "n":
            n_seq = _int_list(rhs)
        else:
            raise ScheduleError(f"unknown schedule key {key!r}")
    if m_seq is None or n_seq is None:
        raise ScheduleError("schedule needs both an m= and an n= line")
    return ParamSchedule(m=m_seq, n=n_seq)


def _int_list(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        return tuple(int(p) for p in parts if p)
    except ValueError as exc:
        raise ScheduleError(f"bad integer in schedule list {text!r}") from exc
