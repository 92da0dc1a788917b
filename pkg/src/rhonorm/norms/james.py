"""James-like norms: collapse a vector along a system of successive index
intervals and measure the sums in a base space.

For a finitely supported x and intervals I_1 < ... < I_l of the index line,
the collapsed vector has q-th coordinate sum(x(i) for i in I_q); the norm is
the supremum of the base norm of the collapsed vector over all systems.
Only the trace of each interval on the support matters, and intervals are
order-convex, so a system is equivalent to a labeling of the support points
as consecutive runs with optional skips between runs (a run cannot resume
after a skip).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, Optional

from ..ordinals import Ordinal, from_int
from ..vectors import Vec00
from .functionals import Functional
from .schedules import ParamSchedule
from .tsirelson import TsirelsonDP, tsirelson_norm

BaseNorm = Callable[[Vec00, ParamSchedule], Fraction]

_Run = tuple[int, int]  # inclusive support-index run


def run_systems(npts: int) -> Iterator[tuple[_Run, ...]]:
    """All run systems over npts support points, deterministically ordered."""
    runs: list[_Run] = []

    def rec(i: int, open_run: bool) -> Iterator[tuple[_Run, ...]]:
        if i == npts:
            yield tuple(runs)
            return
        if open_run:
            # extend the run ending at i-1
            start, _ = runs[-1]
            runs[-1] = (start, i)
            yield from rec(i + 1, True)
            runs[-1] = (start, i - 1)
        # skip point i
        yield from rec(i + 1, False)
        # start a fresh run at i
        runs.append((i, i))
        yield from rec(i + 1, True)
        runs.pop()

    yield from rec(0, False)


def _collapse(x: Vec00, system: tuple[_Run, ...]
              ) -> tuple[Vec00, list[tuple[_Run, Fraction]]]:
    """Collapsed vector on positions 1..l plus the nonzero-sum runs."""
    coeffs = [c for _, c in x.entries]
    kept: list[tuple[_Run, Fraction]] = []
    for run in system:
        s = sum(coeffs[run[0]:run[1] + 1], Fraction(0))
        if s != 0:
            kept.append((run, s))
    vec = Vec00.make([(from_int(q + 1), s) for q, (_, s) in enumerate(kept)])
    return vec, kept


def james_norm(x: Vec00, sched: ParamSchedule,
               base: BaseNorm = tsirelson_norm) -> Fraction:
    if x.is_zero():
        return Fraction(0)
    best = Fraction(0)
    cache: dict[tuple[Fraction, ...], Fraction] = {}
    for system in run_systems(len(x.entries)):
        vec, kept = _collapse(x, system)
        if vec.is_zero():
            continue
        key = tuple(s for _, s in kept)
        got = cache.get(key)
        if got is None:
            got = base(vec, sched)
            cache[key] = got
        if got > best:
            best = got
    return best


def james_norm_witness(x: Vec00, sched: ParamSchedule
                       ) -> tuple[Fraction,
                                  list[tuple[Ordinal, Ordinal]],
                                  Vec00,
                                  Optional[Functional]]:
    """(value, group hulls as ordinal intervals, collapsed vector, base
    witness tree over the collapsed positions).  Groups carry only runs with
    nonzero sums, matching the collapsed coordinates one for one."""
    if x.is_zero():
        return Fraction(0), [], Vec00(), None
    support = x.support()
    best = Fraction(0)
    best_runs: list[tuple[_Run, Fraction]] = []
    best_vec = Vec00()
    for system in run_systems(len(x.entries)):
        vec, kept = _collapse(x, system)
        if vec.is_zero():
            continue
        got = tsirelson_norm(vec, sched)
        if got > best:
            best, best_runs, best_vec = got, kept, vec
    if best == 0:
        return Fraction(0), [], Vec00(), None
    value, tree = _base_witness(best_vec, sched)
    assert value == best
    hulls = [(support[a], support[b]) for (a, b), _ in best_runs]
    return best, hulls, best_vec, tree


def _base_witness(vec: Vec00, sched: ParamSchedule
                  ) -> tuple[Fraction, Functional]:
    dp = TsirelsonDP(vec, sched)
    value = dp.norm()
    tree = dp.witness()
    assert tree is not None and tree.vector.dot(vec) == value
    return value, tree
