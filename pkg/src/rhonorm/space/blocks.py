"""Construction blocks of the coded space: normalized averages that are
almost isometric copies of the unit vector basis of an l1^k, rapidly
increasing sequences of them, and exact pairs -- with structural checkers
for each, reporting depth-bounded functional scans honestly as such.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from ..reports import CheckReport, Waiver
from ..vectors import Vec00, successive
from ..norms.functionals import FCombine, Functional, evaluate, weight_of
from ..norms.james import run_systems
from ..norms.schedules import ParamSchedule
from ..norms.tsirelson import norming_enumerate, tsirelson_norm
from .knorm import k_norm_bounds


# -- l1^k averages ---------------------------------------------------------


def l1k_average_find(blocks: Sequence[Vec00], k: int, C, sched: ParamSchedule,
                     *, budget: int = 5000) -> Vec00:
    """A normalized y = (x_1 + ... + x_k)/k with each ‖x_i‖ at most C.

    Searches contiguous partitions of the given successive blocks into k
    groups; each candidate is normalized by its evaluated norm and certified
    part by part.  Raises when the search space or budget is exhausted
    without a certificate."""
    blocks = tuple(blocks)
    C = Fraction(C)
    if not 1 <= k <= len(blocks):
        raise ValueError(f"k={k} outside 1..{len(blocks)}")
    if C < 1:
        raise ValueError("C must be at least 1")
    if not successive(*blocks):
        raise ValueError("blocks must be successive")
    tried = 0
    for cuts in combinations(range(1, len(blocks)), k - 1):
        tried += 1
        if tried > budget:
            raise ValueError(
                f"l1^{k}-average search budget exhausted after {budget} splits")
        edges = (0,) + cuts + (len(blocks),)
        parts = []
        for lo, hi in zip(edges, edges[1:]):
            acc = blocks[lo]
            for b in blocks[lo + 1:hi]:
                acc = acc + b
            parts.append(acc)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        nu = tsirelson_norm(total, sched)
        if nu == 0:
            continue
        if all(k * tsirelson_norm(p, sched) <= C * nu for p in parts):
            return total.scale(Fraction(1) / nu)
    raise ValueError(
        f"no C-l1^{k} average among {tried} contiguous splits of "
        f"{len(blocks)} blocks")


def risav_check(y: Vec00, k: int, C, sched: ParamSchedule) -> CheckReport:
    """Interval-split bound for an l1^k average: any n < k successive index
    runs satisfy sum of run norms <= C(1 + 2n/k), checked exhaustively."""
    C = Fraction(C)
    pts = len(y.entries)
    if pts > 10:
        raise ValueError(f"{pts} support points is past exhaustive-split scale")
    worst: dict[int, Fraction] = {}
    for system in run_systems(pts):
        n = len(system)
        if not 0 < n < k:
            continue
        tot = Fraction(0)
        for lo, hi in system:
            tot += tsirelson_norm(Vec00(y.entries[lo:hi + 1]), sched)
        if tot > worst.get(n, Fraction(-1)):
            worst[n] = tot
    rows = []
    ok = True
    for n in sorted(worst):
        bound = C * (1 + Fraction(2 * n, k))
        good = worst[n] <= bound
        rows.append({"runs": n, "worst_sum": worst[n], "bound": bound,
                     "ok": good})
        ok = ok and good
    return CheckReport("l1k-interval-splits", ok,
                       details={"k": k, "C": C, "rows": rows})


# -- rapidly increasing sequences ------------------------------------------


def ris_check(xs: Sequence[Vec00], C, eps, sched: ParamSchedule, depth: int,
              *, budget: int = 4000) -> CheckReport:
    """Certify xs as a (C, eps) rapidly increasing sequence.

    A minimal strictly increasing weight-index witness (j_k) is derived from
    the support-size budgets |supp x_k| <= m_{j_{k+1}}·eps; per-element norm
    caps are evaluated exactly; the action bound |f(x_k)| <= C/w(f) for
    lighter type I functionals is scanned over the enumerated family up to
    the given depth and reported as depth-bounded, not absolute."""
    xs = tuple(xs)
    C, eps = Fraction(C), Fraction(eps)
    if not xs:
        raise ValueError("empty sequence")
    if not successive(*xs):
        raise ValueError("sequence must be successive blocks")
    n = len(xs)
    witness: list[Optional[int]] = []
    jprev = 0
    for k in range(n):
        lo = jprev + 1
        if k > 0:
            need = Fraction(len(xs[k - 1].support())) / eps
            while lo <= len(sched) and sched.weight(lo) < need:
                lo += 1
        if lo > len(sched):
            witness.append(None)
            jprev = len(sched) + 1
        else:
            witness.append(lo)
            jprev = lo
    rows = []
    ok = True
    for k, x in enumerate(xs):
        jk = witness[k]
        nrm = tsirelson_norm(x, sched)
        row: dict = {"k": k + 1, "j": jk, "norm": nrm, "norm_ok": nrm <= C}
        if k < n - 1:
            jnext = witness[k + 1]
            row["supp"] = len(x.support())
            if jnext is None:
                row["supp_ok"] = False
            else:
                row["supp_budget"] = sched.weight(jnext) * eps
                row["supp_ok"] = Fraction(len(x.support())) <= row["supp_budget"]
        wrow: dict = {"k": k + 1, "scope": "depth-bounded", "ok": True}
        if jk is None:
            wrow["ok"] = False
            wrow["note"] = "no admissible weight index left in the schedule"
        else:
            below = [s for s in sched.slots()
                     if sched.weight(s) < sched.weight(jk)]
            if below:
                worst = None
                for f in norming_enumerate(x.support(), sched, depth,
                                           budget=budget, slots=below):
                    if not isinstance(f, FCombine):
                        continue
                    v = abs(evaluate(f, x))
                    if worst is None or v * worst["w"] > worst["value"] * f.weight:
                        worst = {"w": f.weight, "value": v,
                                 "bound": C / f.weight}
                if worst is not None:
                    wrow["worst"] = worst
                    wrow["ok"] = worst["value"] <= worst["bound"]
            else:
                wrow["note"] = "no lighter weights exist"
        rows.append({"element": row, "action": wrow})
        ok = ok and row["norm_ok"] and row.get("supp_ok", True) and wrow["ok"]
    return CheckReport("ris", ok, details={
        "C": C, "eps": eps, "depth": depth,
        "witness_j": list(witness),
        "rows": rows,
    })


# -- exact pairs -----------------------------------------------------------


def exact_pair_check(x: Vec00, phi: Functional, C, j: int,
                     sched: ParamSchedule, depth: int, *,
                     budget: int = 4000) -> CheckReport:
    """Certify (x, phi) as a (C, j)-exact pair: bounded norm, unit action,
    the right weight, and the two-sided decay of other weights' actions
    (asserted only on schedules carrying the growth capability)."""
    C = Fraction(C)
    mj = sched.weight(j)
    _, upper = k_norm_bounds(x, sched, budget=budget, depth=depth)
    action = evaluate(phi, x)
    w = weight_of(phi)
    hard = [
        {"check": "norm", "upper": upper, "bound": C, "ok": upper <= C},
        {"check": "action", "value": action, "ok": action == 1},
        {"check": "weight", "w": w, "expect": mj, "ok": w == mj},
    ]
    worst: dict[int, Fraction] = {}
    for f in norming_enumerate(x.support(), sched, depth, budget=budget):
        if not isinstance(f, FCombine):
            continue
        v = abs(evaluate(f, x))
        if v > worst.get(f.slot, Fraction(-1)):
            worst[f.slot] = v
    decay = []
    decay_ok = True
    for slot in sorted(worst):
        if slot == j:
            continue
        if slot < j:
            bound = 2 * C / sched.weight(slot)
            side = "below"
        else:
            bound = C / (mj * mj)
            side = "above"
        good = worst[slot] <= bound
        decay.append({"slot": slot, "side": side, "worst": worst[slot],
                      "bound": bound, "ok": good})
        decay_ok = decay_ok and good
    waivers = []
    ok = all(r["ok"] for r in hard)
    if sched.paper_exact:
        ok = ok and decay_ok
    elif decay:
        waivers.append(Waiver(
            "growth", "decay bounds reported, not asserted: schedule does "
                      "not carry the growth capability"))
    return CheckReport("exact-pair", ok, details={
        "j": j, "C": C, "depth": depth, "hard": hard, "decay": decay,
        "decay_ok": decay_ok,
    }, waivers=waivers)


# -- averaged action bounds for nice sequences -----------------------------


def niceasris_check(xs: Sequence[Vec00], sched: ParamSchedule, depth: int, *,
                    C, eps, j: int, budget: int = 4000) -> CheckReport:
    """Two-case action bound on the average of a certified sequence.

    For y = (1/l)(x_1 + ... + x_l) every enumerated type I functional f must
    satisfy |f(y)| <= 3C/(w(f)·m_j) when w(f) < m_j and |f(y)| <= C/w(f) +
    2C/n_j otherwise; evaluated weight by weight up to the given depth."""
    xs = tuple(xs)
    C, eps = Fraction(C), Fraction(eps)
    nj, mj = sched.arity(j), sched.weight(j)
    if eps > Fraction(1, nj):
        raise ValueError(f"eps {eps} exceeds 1/n_{j} = 1/{nj}")
    l = len(xs)
    if not Fraction(nj, mj) <= l <= nj:
        raise ValueError(f"length {l} outside [n_{j}/m_{j}, n_{j}]")
    if not successive(*xs):
        raise ValueError("sequence must be successive blocks")
    y = xs[0]
    for x in xs[1:]:
        y = y + x
    y = y.scale(Fraction(1, l))
    worst: dict[int, Fraction] = {}
    for f in norming_enumerate(y.support(), sched, depth, budget=budget):
        if not isinstance(f, FCombine):
            continue
        v = abs(evaluate(f, y))
        if v > worst.get(f.slot, Fraction(-1)):
            worst[f.slot] = v
    rows = []
    ok = True
    for slot in sorted(worst):
        w = sched.weight(slot)
        if w < mj:
            bound = 3 * C / (w * mj)
            case = "below"
        else:
            bound = C / w + 2 * C / nj
            case = "at-or-above"
        good = worst[slot] <= bound
        rows.append({"slot": slot, "w": w, "case": case, "worst": worst[slot],
                     "bound": bound, "ok": good})
        ok = ok and good
    return CheckReport("nice-average-action", ok, details={
        "j": j, "C": C, "eps": eps, "l": l, "depth": depth, "rows": rows,
    })
