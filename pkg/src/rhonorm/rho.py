"""Two-variable coding functions on ordinals ("rho functions"), their
closure calculus, finite models, and the three constructions used here:

  * ladder  -- recursion over canonical cofinal sequences with plain counts;
  * smooth  -- the same recursion with a count twist g chosen so that the
               sets F_n stay small relative to n (certified by explicit
               envelope bookkeeping, all exact rationals);
  * universal -- built by successive finite extensions so that every queued
               finite model is realized by a closed set inside a designated
               omega-block.

The three axioms in play, for alpha < beta < gamma:
  (1) rho(alpha,gamma) <= max(rho(alpha,beta), rho(beta,gamma))
  (2) rho(alpha,beta)  <= max(rho(alpha,gamma), rho(beta,gamma))
  (3) {alpha < beta : rho(alpha,beta) <= n} is finite for every beta, n
with the convention rho(alpha,alpha) = 0.

Values at a limit lam follow
  rho(alpha, lam) = max{ g(#(C∩alpha)), rho(alpha, min(C\\alpha)),
                         rho(xi, alpha) for xi in C∩alpha }
over the canonical ladder C of lam.  Successor values follow the degenerate
one-point extension rule rho(alpha, beta+1) = max(1, rho(alpha, beta)),
which is the same formula the universal construction uses for its filler
points, so all three modes agree on how blocks are padded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .ordinals import (Ordinal, OMEGA, from_int, ladder_entry, ladder_next,
                       omega_times, render)
from .reports import CheckReport


class RhoError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Base functions on pairs of naturals (m < n).

def base_positional(m: int, n: int) -> int:
    """rho(m, n) = n.  Both axioms collapse to comparisons of right ends."""
    return n


def make_twin_base(split: int, width: int, branches: int = 2) -> Callable[[int, int], int]:
    """A base function with two (or more) order-isomorphic "branches".

    Layout of the naturals: a root block [0, split), then `branches` blocks
    of length `width` starting at `split`, then plain positional values.
    Within the root and within each branch the value of a pair is the
    position of its larger element (locally positional); a root/branch pair
    gets the constant `split`; a cross-branch pair gets a constant strictly
    above every in-branch value.  Consequence: two sets that differ only by
    swapping one branch for another have order-isomorphic closures, which
    is the engine for building genuinely colliding coding fixtures.
    """
    if split < 1 or width < 1 or branches < 2:
        raise RhoError("twin base needs split >= 1, width >= 1, branches >= 2")
    cross = max(split, width) + 1
    top = split + branches * width

    def region(x: int) -> int:
        # -1 root, t for branch t, branches for the tail region
        if x < split:
            return -1
        if x < top:
            return (x - split) // width
        return branches

    def base(m: int, n: int) -> int:
        rm, rn = region(m), region(n)
        if rn == branches:
            return n
        if rn == -1:
            return n
        if rm == rn:
            return (n - split) % width  # local position of the larger point
        if rm == -1:
            return split
        return cross

    base.layout = {"split": split, "width": width, "branches": branches,
                   "cross": cross, "top": top}  # type: ignore[attr-defined]
    return base


# ---------------------------------------------------------------------------
# Finite models.

@dataclass(frozen=True)
class RhoModel:
    """A finite linear order with a symmetric value matrix and top value p.

    The strict upper triangle is stored row-major: entry (i,j) for
    0 <= i < j < size sits at position i*size - i*(i+1)//2 + (j-i-1).
    """

    size: int
    tri: tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        want = self.size * (self.size - 1) // 2
        if len(self.tri) != want:
            raise RhoError(f"model of size {self.size} needs {want} entries")

    def value(self, i: int, j: int) -> int:
        if i == j:
            return 0
        if i > j:
            i, j = j, i
        return self.tri[i * self.size - i * (i + 1) // 2 + (j - i - 1)]

    def validate(self) -> list[str]:
        problems = []
        if any(v < 0 for v in self.tri):
            problems.append("negative entry")
        for a, b, c in itertools.combinations(range(self.size), 3):
            ab, bc, ac = self.value(a, b), self.value(b, c), self.value(a, c)
            if ac > max(ab, bc):
                problems.append(f"axiom 1 fails at ({a},{b},{c})")
            if ab > max(ac, bc):
                problems.append(f"axiom 2 fails at ({a},{b},{c})")
        if self.size <= 1:
            if self.p != 0:
                problems.append("singleton model must have p = 0")
        elif self.tri and max(self.tri) != self.p:
            problems.append(f"p = {self.p} not attained (max entry {max(self.tri)})")
        return problems

    def initial_segment(self, k: int) -> "RhoModel":
        if not 0 <= k <= self.size:
            raise RhoError("bad initial segment length")
        sub = tuple(self.value(i, j) for i in range(k) for j in range(i + 1, k))
        return RhoModel(size=k, tri=sub, p=max(sub) if sub else 0)


def enumerate_models(max_size: int, max_p: int) -> list[RhoModel]:
    """All valid models with size <= max_size and p <= max_p, in a fixed
    deterministic order.  The ground set is {0..size-1}, so this is already
    an enumeration up to isomorphism."""
    out: list[RhoModel] = []
    for size in range(1, max_size + 1):
        npairs = size * (size - 1) // 2
        for tri in itertools.product(range(max_p + 1), repeat=npairs):
            p = max(tri) if tri else 0
            m = RhoModel(size=size, tri=tri, p=p)
            if not m.validate():
                out.append(m)
    return out


def models_isomorphic(a: RhoModel, b: RhoModel) -> bool:
    """The order isomorphism is unique, so this is matrix + p equality."""
    return a.size == b.size and a.p == b.p and a.tri == b.tri


# ---------------------------------------------------------------------------
# Smoothness envelopes (exact upper bounds for #F_n at limits, with exact
# tail bounds sup_{n >= 2^s} E(n)/n used to certify the count twists).

def _floorlog2(n: int) -> int:
    return n.bit_length() - 1


@dataclass
class _Env:
    """E(n) = const + logs*floor(log2 n) + sum of nested limit envelopes."""

    const: int
    logs: int
    subs: tuple["_LolData", ...] = ()

    def eval(self, n: int) -> int:
        return (self.const + self.logs * _floorlog2(n)
                + sum(s.env_eval(n) for s in self.subs))

    def tail(self, s: int) -> Fraction:
        def f(t: int) -> Fraction:
            return Fraction(self.const + self.logs * t, 2 ** t)
        atomic = max(f(s), f(s + 1))  # decreasing from t >= 1 on
        return atomic + sum((sub.env_tail(s) for sub in self.subs), Fraction(0))

    def plus(self, const: int = 0, logs: int = 0) -> "_Env":
        return _Env(self.const + const, self.logs + logs, self.subs)


class _LolData:
    """Count-twist table for one limit-of-limits lam: g(i) = n_i with the
    n_i chosen as the least powers of two satisfying the exact certificate

        sum_{k<=i} tail_{lam_k}(s) + (i+1)/2^s  <=  2^-i   (n_i = 2^s),

    whose left side dominates  sum_{k<=i} #F_n^{lam_k}/n + (i+1)/n  for all
    n >= n_i.  The (i+1)/2^s summand covers the ladder points lam_k
    themselves, which can lie in F_n^lam without lying in any F_n^{lam_k}.
    """

    def __init__(self, rho: "RhoFn", lam: Ordinal) -> None:
        self.rho = rho
        self.lam = lam
        self.table: list[int] = []
        self._child_envs: list[_Env] = []

    def _child_env(self, k: int) -> _Env:
        while len(self._child_envs) <= k:
            child = ladder_entry(self.lam, len(self._child_envs))
            self._child_envs.append(self.rho._envelope(child))
        return self._child_envs[k]

    def _grow(self) -> None:
        i = len(self.table)
        s = _floorlog2(self.table[-1]) + 1 if self.table else 0
        while True:
            tau = sum((self._child_env(k).tail(s) for k in range(i + 1)),
                      Fraction(i + 1, 2 ** s))
            if tau <= Fraction(1, 2 ** i):
                break
            s += 1
        self.table.append(2 ** s)

    def g(self, i: int) -> int:
        while len(self.table) <= i:
            self._grow()
        return self.table[i]

    def i0(self, n: int) -> int:
        """max{i : n_i <= n}, or -1 when even n_0 exceeds n."""
        while not self.table or self.table[-1] <= n:
            self._grow()
        best = -1
        for i, v in enumerate(self.table):
            if v <= n:
                best = i
        return best

    def env_eval(self, n: int) -> int:
        i = self.i0(n)
        return sum(self._child_env(k).eval(n) + 1 for k in range(i + 1))

    def env_tail(self, s: int) -> Fraction:
        i = self.i0(2 ** s)
        return Fraction(1, 2 ** max(i, 0))


# ---------------------------------------------------------------------------
# Universal-mode extension records.

@dataclass
class _ExtStep:
    kind: str  # "default" | "model"
    delta: Ordinal
    new_points: tuple[Ordinal, ...]
    m0: tuple[Ordinal, ...] = ()
    model: Optional[RhoModel] = None

    def m1(self) -> tuple[Ordinal, ...]:
        return self.m0 + self.new_points


# ---------------------------------------------------------------------------
# The evaluator.

class RhoFn:
    """One concrete rho function below a fixed countable bound.

    mode = "ladder" or "smooth": values below omega come from `base`;
    mode = "universal": the whole function is generated by extension steps,
    and `base` is ignored (the construction owns its naturals too).
    """

    def __init__(self, mode: str, bound: Ordinal, *,
                 base: Callable[[int, int], int] = base_positional) -> None:
        if mode not in ("ladder", "smooth", "universal"):
            raise RhoError(f"unknown mode {mode!r}")
        if not bound.is_limit() or bound.is_zero():
            raise RhoError("bound must be a nonzero limit ordinal")
        self.mode = mode
        self.bound = bound
        self.base = base
        self._memo: dict[tuple[Ordinal, Ordinal], int] = {}
        self._fn_memo: dict[tuple[Ordinal, int], tuple[Ordinal, ...]] = {}
        self._env_memo: dict[Ordinal, _Env] = {}
        self._lol: dict[Ordinal, _LolData] = {}
        # universal-mode state
        self._creator: dict[Ordinal, _ExtStep] = {}
        self._cursor: dict[Ordinal, int] = {}  # block base -> next offset
        self.extension_log: list[_ExtStep] = []

    # -- evaluation ---------------------------------------------------

    def value(self, a: Ordinal, b: Ordinal) -> int:
        if a > b:
            raise RhoError("value(a, b) needs a <= b")
        if b >= self.bound:
            raise RhoError(f"{render(b)} is outside the bound {render(self.bound)}")
        if a == b:
            return 0
        key = (a, b)
        got = self._memo.get(key)
        if got is None:
            got = self._compute(a, b)
            self._memo[key] = got
        return got

    def _compute(self, a: Ordinal, b: Ordinal) -> int:
        if self.mode == "universal":
            return self._compute_universal(a, b)
        if b.is_natural():
            return self.base(a.as_natural(), b.as_natural())
        if b.is_successor():
            return max(1, self.value(a, b.pred()))
        return self._limit_value(a, b)

    def _limit_value(self, a: Ordinal, lam: Ordinal) -> int:
        count, entry = ladder_next(lam, a)
        terms = [self._count_term(lam, count), self.value(a, entry) if entry != a else 0]
        for i in range(count):
            terms.append(self.value(ladder_entry(lam, i), a))
        return max(terms)

    def _count_term(self, lam: Ordinal, i: int) -> int:
        if self.mode != "smooth":
            return i
        try:
            gamma = lam.limit_pred()
        except ValueError:
            gamma = None
        if gamma is not None:
            return 2 ** i
        return self._lol_data(lam).g(i)

    def _lol_data(self, lam: Ordinal) -> _LolData:
        got = self._lol.get(lam)
        if got is None:
            got = _LolData(self, lam)
            self._lol[lam] = got
        return got

    def _envelope(self, beta: Ordinal) -> _Env:
        """An exact upper bound shape for n -> #F_n^beta (smooth mode)."""
        got = self._env_memo.get(beta)
        if got is not None:
            return got
        if beta.is_zero():
            env = _Env(0, 0)
        elif beta.is_natural():
            env = _Env(beta.as_natural(), 0)
        elif not beta.is_limit():
            env = self._envelope(beta.limit_part()).plus(const=beta.natural_part())
        else:
            try:
                gamma = beta.limit_pred()
            except ValueError:
                gamma = None
            if gamma is not None:
                env = self._envelope(gamma).plus(const=1, logs=1)
            else:
                env = _Env(0, 0, (self._lol_data(beta),))
        self._env_memo[beta] = env
        return env

    # -- universal mode ----------------------------------------------

    def _ensure_point(self, b: Ordinal) -> None:
        """Materialize default filler points of b's block up to b."""
        if not b.is_successor():
            return
        lam, k = b.limit_part(), b.natural_part()
        cur = self._cursor.get(lam, 1)
        while cur <= k:
            point = lam + from_int(cur)
            step = _ExtStep(kind="default", delta=point, new_points=(point,))
            self._creator[point] = step
            cur += 1
        self._cursor[lam] = max(cur, self._cursor.get(lam, 1))

    def _compute_universal(self, a: Ordinal, b: Ordinal) -> int:
        if b.is_zero():
            raise RhoError("no pairs below 0")
        if b.is_limit():
            return self._limit_value(a, b)
        self._ensure_point(b)
        step = self._creator[b]
        if step.kind == "default":
            return max(1, self.value(a, b.pred()))
        assert step.model is not None
        m1 = step.m1()
        if a in m1:
            pos = {x: i for i, x in enumerate(m1)}
            return step.model.value(pos[a], pos[b])
        if step.m0 and a <= step.m0[-1]:
            anchor = next(x for x in step.m0 if x > a)
            terms = [self.value(a, anchor)]
            terms.extend(self.value(xi, a) for xi in step.m0 if xi < a)
            return max(terms)
        terms = [step.model.p + 1, self.value(a, step.delta.pred())]
        terms.extend(self.value(xi, a) for xi in step.m0)
        return max(terms)

    def universal_points(self) -> list[Ordinal]:
        return sorted(self._creator)

    # -- F_n sets and closures ----------------------------------------

    def f_n_set(self, beta: Ordinal, n: int) -> tuple[Ordinal, ...]:
        """{alpha < beta : rho(alpha, beta) <= n}, exactly."""
        if n < 0:
            return ()
        key = (beta, n)
        got = self._fn_memo.get(key)
        if got is None:
            got = tuple(sorted(self._f_n_candidates(beta, n)))
            self._fn_memo[key] = got
        return got

    def _f_n_candidates(self, beta: Ordinal, n: int) -> set[Ordinal]:
        if beta.is_zero():
            return set()
        if self.mode != "universal" and beta.is_natural():
            b = beta.as_natural()
            return {from_int(a) for a in range(b)
                    if self.base(a, b) <= n}
        if beta.is_limit():
            cands: set[Ordinal] = set()
            i = 0
            while self._count_term(beta, i) <= n:
                entry = ladder_entry(beta, i)
                cands.add(entry)
                cands.update(self.f_n_set(entry, n))
                i += 1
            return {a for a in cands if self.value(a, beta) <= n}
        # successor point
        if self.mode != "universal":
            if n < 1:
                return set()
            prev = beta.pred()
            return set(self.f_n_set(prev, n)) | {prev}
        self._ensure_point(beta)
        step = self._creator[beta]
        if step.kind == "default":
            if n < 1:
                return set()
            prev = beta.pred()
            return set(self.f_n_set(prev, n)) | {prev}
        cands = {x for x in step.m1() if x < beta}
        cands.update(step.m0)
        prev = step.delta.pred()
        cands.add(prev)
        cands.update(self.f_n_set(prev, n))
        for m in step.m0:
            cands.update(self.f_n_set(m, n))
        return {a for a in cands if self.value(a, beta) <= n}

    def closure(self, f: Iterable[Ordinal], p: int) -> tuple[Ordinal, ...]:
        out: set[Ordinal] = set()
        for beta in f:
            out.add(beta)
            out.update(self.f_n_set(beta, p))
        return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Module-level operations (thin wrappers with the contract names).

def rho_eval(rho: RhoFn, a: Ordinal, b: Ordinal) -> int:
    return rho.value(a, b)


def p_of(rho: RhoFn, f: Sequence[Ordinal]) -> int:
    f = sorted(f)
    if not f:
        raise RhoError("p_of needs a nonempty set")
    return max((rho.value(a, b) for a, b in itertools.combinations(f, 2)),
               default=0)


def closure(rho: RhoFn, f: Iterable[Ordinal], p: int) -> tuple[Ordinal, ...]:
    return rho.closure(f, p)


def is_p_closed(rho: RhoFn, f: Iterable[Ordinal], p: int) -> bool:
    fs = tuple(sorted(f))
    return rho.closure(fs, p) == fs


def f_n_set(rho: RhoFn, beta: Ordinal, n: int) -> tuple[Ordinal, ...]:
    return rho.f_n_set(beta, n)


def rho_bar(rho: RhoFn, a: Ordinal, b: Ordinal) -> int:
    v = rho.value(a, b)
    below = len(rho.f_n_set(a, v)) + 1  # xi = a always qualifies
    return max(v, below)


def model_of(rho: RhoFn, f: Sequence[Ordinal]) -> RhoModel:
    pts = sorted(f)
    if not pts:
        raise RhoError("model_of needs a nonempty set")
    tri = tuple(rho.value(pts[i], pts[j])
                for i in range(len(pts)) for j in range(i + 1, len(pts)))
    return RhoModel(size=len(pts), tri=tri, p=max(tri) if tri else 0)


def verify_rho_axioms(rho: RhoFn, f: Sequence[Ordinal]) -> CheckReport:
    """Axioms 1 and 2 on all triples of f; the local-finiteness axiom is
    reported as counts restricted to f (finiteness itself needs no witness
    at desk scale)."""
    pts = sorted(set(f))
    violations: list[dict] = []
    for a, b, c in itertools.combinations(pts, 3):
        ab, bc, ac = rho.value(a, b), rho.value(b, c), rho.value(a, c)
        if ac > max(ab, bc):
            violations.append({"axiom": 1, "triple": [a, b, c],
                               "values": [ab, bc, ac]})
        if ab > max(ac, bc):
            violations.append({"axiom": 2, "triple": [a, b, c],
                               "values": [ab, bc, ac]})
    counts = {}
    if len(pts) >= 2:
        pf = p_of(rho, pts)
        for b in pts:
            row = {}
            for n in range(pf + 1):
                row[n] = sum(1 for a in pts if a < b and rho.value(a, b) <= n)
            counts[render(b)] = row
    return CheckReport(
        name="rho-axioms",
        ok=not violations,
        details={"set": list(pts), "violations": violations,
                 "axiom3_counts": counts},
    )


# ---------------------------------------------------------------------------
# Builders.

def build_ladder_rho(bound: Ordinal, *,
                     base: Callable[[int, int], int] = base_positional) -> RhoFn:
    return RhoFn("ladder", bound, base=base)


def build_smooth_rho(bound: Ordinal, *,
                     base: Callable[[int, int], int] = base_positional) -> RhoFn:
    return RhoFn("smooth", bound, base=base)


def smooth_tables(rho: RhoFn) -> dict[str, list[int]]:
    """The count-twist tables (n_i) chosen so far, per limit-of-limits."""
    return {render(lam): list(d.table) for lam, d in sorted(rho._lol.items())}


def universal_extend(rho: RhoFn, model: RhoModel, m0: Sequence[Ordinal] = (), *,
                     block: Ordinal = OMEGA,
                     capacity: Optional[int] = None) -> tuple[tuple[Ordinal, ...], CheckReport]:
    """One universality step: realize `model` on m0 plus fresh points of the
    given block; returns the realized set M1 and its certificate."""
    if rho.mode != "universal":
        raise RhoError("universal_extend needs a universal-mode function")
    problems = model.validate()
    if problems:
        raise RhoError("invalid model: " + "; ".join(problems))
    m0s = tuple(sorted(m0))
    k0 = len(m0s)
    if k0 >= model.size and k0 > 0:
        raise RhoError("m0 must be a proper initial segment realization")
    if not (block.is_limit() and block < rho.bound):
        raise RhoError("block base must be a limit below the bound")
    if m0s:
        pm0 = p_of(rho, m0s)
        if not is_p_closed(rho, m0s, pm0):
            raise RhoError("m0 is not closed for its own p")
        if not models_isomorphic(model_of(rho, m0s), model.initial_segment(k0)):
            raise RhoError("m0 does not realize an initial segment of the model")
    l = model.size - k0
    if capacity is not None and l > capacity:
        raise RhoError(f"target interval holds {capacity} points, need {l}")
    if l == 0:
        m1 = m0s
    else:
        start = rho._cursor.get(block, 1)
        new = tuple(block + from_int(start + i) for i in range(l))
        if any(pt >= rho.bound for pt in new):
            raise RhoError("extension escapes the bound")
        if m0s and m0s[-1] >= new[0]:
            raise RhoError("m0 must lie strictly below the fresh points")
        step = _ExtStep(kind="model", delta=new[0], new_points=new,
                        m0=m0s, model=model)
        for pt in new:
            rho._creator[pt] = step
        rho._cursor[block] = start + l
        rho.extension_log.append(step)
        m1 = step.m1()
    realized = model_of(rho, m1)
    iso = models_isomorphic(realized, model)
    closed = is_p_closed(rho, m1, model.p)
    return m1, CheckReport(
        name="universal-extend",
        ok=iso and closed,
        details={"block": block, "m1": list(m1), "iso": iso,
                 "p_closed": closed, "model_p": model.p,
                 "model_size": model.size},
    )


def build_universal_rho(bound: Ordinal,
                        queue: Sequence[tuple[RhoModel, Optional[Ordinal]]]
                        ) -> tuple[RhoFn, list[CheckReport]]:
    """Realize every queued model inside its target block (default: the
    k-th model goes to block [w*(k+1), w*(k+2)))."""
    rho = RhoFn("universal", bound)
    certs: list[CheckReport] = []
    for idx, (model, target) in enumerate(queue):
        block = target if target is not None else _nth_block(idx)
        if block >= bound:
            raise RhoError(
                f"queue entry {idx} targets {render(block)} outside bound "
                f"{render(bound)}")
        _, cert = universal_extend(rho, model, (), block=block)
        certs.append(cert)
    return rho, certs


def _nth_block(idx: int) -> Ordinal:
    return omega_times(idx + 1)


# ---------------------------------------------------------------------------
# Smoothness reporting.

def smoothness_report(rho: RhoFn, lam: Ordinal, n_max: int) -> CheckReport:
    """Counts #F_n^lam for n <= n_max, the max ratio #F_n/n, and (when lam
    is a successor limit gamma+w) the bound #F_n^lam <= #F_n^gamma + 1 +
    floor(log2 n) checked exactly."""
    sizes = {n: len(rho.f_n_set(lam, n)) for n in range(1, n_max + 1)}
    ratios = [Fraction(sz, n) for n, sz in sizes.items()]
    max_ratio = max(ratios)
    details: dict = {"lambda": lam, "n_max": n_max,
                     "sizes": {str(n): sizes[n] for n in sizes},
                     "max_ratio": max_ratio}
    ok = True
    try:
        gamma = lam.limit_pred()
    except ValueError:
        gamma = None
    if gamma is not None:
        bad = []
        for n in range(1, n_max + 1):
            cap = len(rho.f_n_set(gamma, n)) + 1 + _floorlog2(n)
            if sizes[n] > cap:
                bad.append({"n": n, "size": sizes[n], "cap": cap})
        details["successor_limit_bound_violations"] = bad
        ok = not bad
    if rho.mode == "smooth":
        details["count_twists"] = smooth_tables(rho)
    return CheckReport(name="smoothness", ok=ok, details=details)


# ---------------------------------------------------------------------------
# Deterministic ordinal sampling (used by the axiom fuzz suites).

def ordinal_grid(bound: Ordinal, width: int = 8) -> list[Ordinal]:
    """A deterministic spread of ordinals below `bound`: small naturals,
    ladder entries of `bound` and of those entries, and small offsets."""
    seen: set[Ordinal] = set()
    for k in range(width):
        seen.add(from_int(k))

    def expand(lam: Ordinal, depth: int) -> None:
        for i in range(width):
            entry = ladder_entry(lam, i)
            if entry < bound:
                seen.add(entry)
                for off in range(1, max(2, width // 2)):
                    cand = entry + from_int(off)
                    if cand < bound:
                        seen.add(cand)
                if depth > 0 and entry.is_limit() and not entry.is_zero():
                    expand(entry, depth - 1)

    expand(bound, 1)
    return sorted(x for x in seen if x < bound)
