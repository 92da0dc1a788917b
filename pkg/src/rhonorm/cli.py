"""Command-line front end over the evaluators, builders, and suites.

Every invocation resolves a RunConfig in three layers: dataclass defaults,
then the JSON file named by the TN_CONFIG environment variable, then
explicit flags.  Reports are printed as text, JSON, or CSV; the JSON form
is versioned ("schema": 1), embeds the fully resolved config and any
waiver flags, contains no floats (rationals render as "p/q"), and is
byte-identical across reruns with the same config and seed.

Exit codes: 0 success, 1 a suite ran and failed an assertion, 2 any
parse, config, or usage error (messages carry byte offsets where the
underlying parsers provide them).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import Optional, Sequence

from .norms.functionals import render_functional
from .norms.james import james_norm
from .norms.schedules import ParamSchedule, ScheduleError, parse_schedule
from .norms.tsirelson import aux_w_norm, tsirelson_norm, tsirelson_norm_witness
from .ordinals import (OMEGA, Ordinal, OrdinalParseError, parse as parse_ordinal,
                       render)
from .reports import SCHEMA_VERSION, CheckReport, dumps, jsonable
from .rho import (RhoError, RhoFn, RhoModel, base_positional, build_ladder_rho,
                  build_smooth_rho, build_universal_rho, closure, make_twin_base,
                  ordinal_grid, p_of, smoothness_report, verify_rho_axioms)
from .space import (BlockAllocator, CodingError, CodingState, build_special_sequence,
                    canonical_pair_source, canonical_phi_source,
                    dependent_sequence_build, exact_pair_check, hi_demo,
                    k_norm_bounds_witness, replaying_source, restriction_audit,
                    ris_check, tree_analysis_validate, tree_interference)
from .suites import SUITES, SuiteConfig, run_suite
from .vectors import Vec00, parse_vector

# Big enough for every chain the sigma registry can schedule in toy mode,
# and cheap enough that `norm tsirelson` stays instant.
DEMO_SCHEDULE = ("m=2,3,4,6,7,8,9,10,11,12,13,14,15,16;"
                 "n=2,3,5,6,7,8,9,10,11,12,13,14,15,16")


@dataclass(frozen=True)
class RunConfig:
    """The resolved knobs shared by every subcommand.

    `schedule` is an inline literal, a file path, or "paper:K";
    `ladder` picks the base on the naturals ("positional" or
    "twin:<split>,<width>"); `depth`/`budget` default per command when
    left unset.  The seed only orders fuzz suites; evaluators are
    deterministic.
    """

    schedule: str = DEMO_SCHEDULE
    bound: str = "w^4"
    rho: str = "ladder"
    ladder: str = "positional"
    coding: str = "toy"
    depth: Optional[int] = None
    budget: Optional[int] = None
    seed: int = 0
    format: str = "text"
    unconditional: bool = False


class CliError(Exception):
    """Config or usage problems that should exit 2."""


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    path = os.environ.get("TN_CONFIG")
    if path:
        try:
            with open(path, "r", encoding="ascii") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"TN_CONFIG {path!r}: {exc}") from None
        if not isinstance(data, dict):
            raise CliError(f"TN_CONFIG {path!r}: expected a JSON object")
        known = {f.name for f in fields(RunConfig)}
        for key in data:
            if key not in known:
                raise CliError(f"TN_CONFIG {path!r}: unknown key {key!r}")
        cfg = replace(cfg, **data)
    overrides = {}
    for name in ("schedule", "bound", "coding", "depth", "budget", "seed",
                 "format", "unconditional"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    cfg = replace(cfg, **overrides)
    if cfg.format not in ("text", "json", "csv"):
        raise CliError(f"unknown format {cfg.format!r}")
    if cfg.coding not in ("strict", "toy"):
        raise CliError(f"unknown coding mode {cfg.coding!r}")
    if cfg.rho not in ("ladder", "smooth", "universal"):
        raise CliError(f"unknown rho mode {cfg.rho!r}")
    for knob in ("depth", "budget", "seed"):
        value = getattr(cfg, knob)
        if value is not None and value < 0:
            raise CliError(f"{knob} must be >= 0, got {value}")
    return cfg


# ---------------------------------------------------------------------------
# Config -> objects.

def schedule_of(cfg: RunConfig) -> ParamSchedule:
    src = cfg.schedule
    if os.path.isfile(src):
        with open(src, "r", encoding="ascii") as fh:
            src = fh.read()
    return parse_schedule(src)


def _base_of(cfg: RunConfig):
    if cfg.ladder == "positional":
        return base_positional
    if cfg.ladder.startswith("twin:"):
        try:
            split, width = (int(t) for t in cfg.ladder[5:].split(","))
        except ValueError:
            raise CliError(f"bad ladder profile {cfg.ladder!r}") from None
        return make_twin_base(split, width)
    raise CliError(f"unknown ladder profile {cfg.ladder!r}")


def rho_of(cfg: RunConfig) -> RhoFn:
    bound = parse_ordinal(cfg.bound)
    if cfg.rho == "smooth":
        return build_smooth_rho(bound, base=_base_of(cfg))
    if cfg.rho == "universal":
        return RhoFn("universal", bound)
    return build_ladder_rho(bound, base=_base_of(cfg))


def coding_of(cfg: RunConfig, sched: ParamSchedule) -> CodingState:
    return CodingState(cfg.coding, max_slot=len(sched.m))


def _parse_set(text: str) -> tuple[Ordinal, ...]:
    out = []
    offset = 0
    for chunk in text.split(","):
        piece = chunk.strip()
        sub = offset + (chunk.index(piece) if piece else 0)
        try:
            out.append(parse_ordinal(piece))
        except OrdinalParseError as exc:
            raise OrdinalParseError(f"bad set element {piece!r}",
                                    sub + exc.offset) from None
        offset += len(chunk) + 1
    return tuple(sorted(set(out)))


# ---------------------------------------------------------------------------
# Output.

def _flat_rows(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        rows = []
        for key in sorted(obj):
            rows.extend(_flat_rows(obj[key], f"{prefix}{key}."))
        return rows
    if isinstance(obj, list):
        rows = []
        for i, item in enumerate(obj):
            rows.extend(_flat_rows(item, f"{prefix}{i}."))
        return rows
    return [(prefix[:-1], str(obj))]


def emit(cfg: RunConfig, command: str, report, text_lines: Sequence[str]) -> None:
    if cfg.format == "json":
        sys.stdout.write(dumps({
            "schema": SCHEMA_VERSION,
            "command": command,
            "config": asdict(cfg),
            "report": jsonable(report),
        }))
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in _flat_rows(jsonable(report)):
            writer.writerow([key, value])
        sys.stdout.write(buf.getvalue())
    else:
        for line in text_lines:
            print(line)


def _rat(q: Fraction) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# Commands.

def cmd_norm(args: argparse.Namespace, cfg: RunConfig) -> int:
    if not args.vector:
        raise CliError("norm needs --vector")
    sched = schedule_of(cfg)
    x = parse_vector(args.vector)
    if args.target == "k-bounds":
        rho = rho_of(cfg)
        coding = coding_of(cfg, sched)
        lower, upper, wit = k_norm_bounds_witness(
            x, sched, rho, coding,
            budget=cfg.budget if cfg.budget is not None else 2000,
            depth=cfg.depth if cfg.depth is not None else 2)
        report = {"lower": lower, "upper": upper,
                  "witness": render_functional(wit) if wit is not None else None,
                  "waivers": coding.waivers}
        emit(cfg, f"norm {args.target}", report, [
            f"lower: {_rat(lower)}",
            f"upper: {_rat(upper)}",
            f"witness: {report['witness']}",
        ])
        return 0
    if args.target == "tsirelson":
        value = tsirelson_norm(x, sched)
    elif args.target == "w":
        value = aux_w_norm(x, sched)
    else:
        value = james_norm(x, sched)
    emit(cfg, f"norm {args.target}", {"value": value}, [_rat(value)])
    return 0


def _pairs_table(rho: RhoFn, pts: Sequence[Ordinal]) -> list[list]:
    return [[a, b, rho.value(a, b)]
            for i, a in enumerate(pts) for b in pts[i + 1:]]


def _load_models(path: str) -> list[tuple[RhoModel, Optional[Ordinal]]]:
    try:
        with open(path, "r", encoding="ascii") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"queue file {path!r}: {exc}") from None
    if not isinstance(data, list):
        raise CliError(f"queue file {path!r}: expected a JSON array")
    queue = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or not {"size", "tri", "p"} <= set(entry):
            raise CliError(f"queue entry {i}: need size, tri, p")
        model = RhoModel(size=entry["size"], tri=tuple(entry["tri"]),
                         p=entry["p"])
        problems = model.validate()
        if problems:
            raise CliError(f"queue entry {i}: " + "; ".join(problems))
        target = entry.get("target")
        queue.append((model, parse_ordinal(target) if target else None))
    return queue


def cmd_rho(args: argparse.Namespace, cfg: RunConfig) -> int:
    sub = args.sub
    report = {"pairs": [], "violations": [], "certificates": []}
    lines: list[str] = []
    if sub == "universal":
        if not args.queue:
            raise CliError("rho universal needs --queue <models.json>")
        queue = _load_models(args.queue)
        _, certs = build_universal_rho(parse_ordinal(cfg.bound), queue)
        report["certificates"] = certs
        for i, cert in enumerate(certs):
            lines.append(f"model {i}: {'ok' if cert.ok else 'FAIL'}")
        lines.append(f"certified {sum(c.ok for c in certs)}/{len(certs)}")
    elif sub == "smooth":
        rho = build_smooth_rho(parse_ordinal(cfg.bound), base=_base_of(cfg))
        lams = (_parse_set(args.set) if args.set
                else (OMEGA, parse_ordinal("w*2"), parse_ordinal("w^2")))
        n_max = cfg.budget if cfg.budget is not None else 64
        for lam in lams:
            rep = smoothness_report(rho, lam, n_max)
            report["certificates"].append(rep)
            lines.append(f"lambda {render(lam)}: "
                         f"{'ok' if rep.ok else 'FAIL'} "
                         f"max_ratio {_rat(rep.details['max_ratio'])}")
    elif sub == "closure":
        if not args.set:
            raise CliError("rho closure needs --set")
        rho = rho_of(cfg)
        pts = _parse_set(args.set)
        p = args.p if args.p is not None else p_of(rho, pts)
        out = closure(rho, pts, p)
        report["closure"] = list(out)
        report["p"] = p
        report["pairs"] = _pairs_table(rho, out)
        lines.append(",".join(render(a) for a in out))
    elif sub == "axioms":
        if not args.set:
            raise CliError("rho axioms needs --set")
        rho = rho_of(cfg)
        pts = _parse_set(args.set)
        rep = verify_rho_axioms(rho, pts)
        report["pairs"] = _pairs_table(rho, pts)
        report["violations"] = rep.details["violations"]
        report["axiom3_counts"] = rep.details["axiom3_counts"]
        lines.append(f"violations: {len(rep.details['violations'])}")
    else:  # table
        rho = rho_of(cfg)
        pts = (_parse_set(args.set) if args.set
               else ordinal_grid(parse_ordinal(cfg.bound), 8))
        report["pairs"] = _pairs_table(rho, pts)
        for a, b, v in report["pairs"]:
            lines.append(f"{render(a)}\t{render(b)}\t{v}")
    emit(cfg, f"rho {sub}", report, lines)
    return 0


def _build_demo_chain(cfg: RunConfig, sched: ParamSchedule, rho: RhoFn,
                      coding: CodingState, *, start: int = 0,
                      length: Optional[int]):
    alloc = BlockAllocator(start)
    source = canonical_phi_source(sched, alloc)
    return build_special_sequence(source, 3, sched, rho, coding,
                                  length=length, start_slot=4)


def cmd_special(args: argparse.Namespace, cfg: RunConfig) -> int:
    sched = schedule_of(cfg)
    rho = rho_of(cfg)
    coding = coding_of(cfg, sched)
    if args.sub == "build":
        seq = _build_demo_chain(cfg, sched, rho, coding, length=cfg.depth)
        report = {"odd_slot": seq.odd_slot, "slots": list(seq.slots),
                  "weights": list(seq.weights), "p_seq": list(seq.p_seq),
                  "phis": [render_functional(f) for f in seq.phis],
                  "waivers": coding.waivers}
        lines = [f"length: {seq.length}",
                 f"slots: {','.join(map(str, seq.slots))}",
                 f"weights: {','.join(map(str, seq.weights))}",
                 f"p_seq: {','.join(map(str, seq.p_seq))}"]
        lines += [f"phi[{i}]: {report['phis'][i]}" for i in range(seq.length)]
        emit(cfg, "special build", report, lines)
        return 0
    # interfere: a full chain against a fork that replays part of it
    length = cfg.depth if cfg.depth is not None else 4
    keep = max(1, length - 2)
    a = _build_demo_chain(cfg, sched, rho, coding, length=length)
    fork = replaying_source(a.phis[:keep],
                            canonical_phi_source(sched, BlockAllocator(500)))
    b = build_special_sequence(fork, 3, sched, rho, coding,
                               length=length, start_slot=4)
    kappa, lam, rep = tree_interference(a, b, rho)
    report = {"kappa": kappa, "lambda": lam, "kept_prefix": keep,
              "report": rep}
    lines = [f"kappa: {kappa}", f"lambda: {lam}",
             f"interference: {'ok' if rep.ok else 'FAIL'}"]
    lines += [f"  {tp}: {'ok' if rep.details[tp]['ok'] else 'FAIL'}"
              for tp in ("tp1", "tp2", "tp3", "tp4")]
    emit(cfg, "special interfere", report, lines)
    return 0 if rep.ok else 1


def cmd_space(args: argparse.Namespace, cfg: RunConfig) -> int:
    sched = schedule_of(cfg)
    if args.sub == "norm-bounds":
        if not args.vector:
            raise CliError("space norm-bounds needs --vector")
        rho = rho_of(cfg)
        coding = coding_of(cfg, sched)
        x = parse_vector(args.vector)
        lower, upper, wit = k_norm_bounds_witness(
            x, sched, rho, coding,
            budget=cfg.budget if cfg.budget is not None else 2000,
            depth=cfg.depth if cfg.depth is not None else 2)
        report = {"lower": lower, "upper": upper,
                  "witness": render_functional(wit) if wit is not None else None,
                  "waivers": coding.waivers}
        emit(cfg, "space norm-bounds", report, [
            f"lower: {_rat(lower)}",
            f"upper: {_rat(upper)}",
            f"witness: {report['witness']}",
        ])
        return 0
    if args.sub == "demo-hi":
        rep = hi_demo()
        d = rep.details
        lines = [
            f"plain average lower bound: {_rat(d['plain_lower'])}",
            f"alternating average upper bound: {_rat(d['alt_desk'])}",
            f"separated: {d['separated']}",
            f"ratio: {_rat(d['ratio'])}",
            f"waivers: {','.join(sorted({w.code for w in rep.waivers})) or '-'}",
        ]
        emit(cfg, "space demo-hi", rep, lines)
        return 0 if rep.ok else 1
    # space check <kind>
    kind = args.kind
    if kind is None:
        raise CliError("space check needs a kind: ris, exact-pair, "
                       "dependent, or tree")
    depth = cfg.depth if cfg.depth is not None else 2
    budget = cfg.budget if cfg.budget is not None else 2000
    if kind == "ris":
        source = canonical_pair_source(sched, BlockAllocator(0))
        xs = [source(slot)[0] for slot in (2, 4, 6)]
        rep = ris_check(xs, 2, 1, sched, depth, budget=budget)
    elif kind == "exact-pair":
        x, phi = canonical_pair_source(sched, BlockAllocator(0))(2)
        rep = exact_pair_check(x, phi, 2, 2, sched, depth, budget=budget)
    elif kind == "dependent":
        rho = rho_of(cfg)
        coding = coding_of(cfg, sched)
        _, rep = dependent_sequence_build(
            1, canonical_pair_source(sched, BlockAllocator(16)), sched, rho,
            coding, length=min(3, sched.arity(3)), start_slot=4)
    else:  # tree: validate the witness tree of the configured vector
        x = parse_vector(args.vector) if args.vector else parse_vector(
            "0:1,5:1,9:1")
        _, tree = tsirelson_norm_witness(x, sched)
        rep = tree_analysis_validate(tree, sched)
        audit = restriction_audit(tree, sched,
                                  unconditional=cfg.unconditional)
        rep = CheckReport(name=rep.name, ok=rep.ok and audit.ok,
                          details={"analysis": rep, "restrictions": audit},
                          waivers=rep.waivers)
    lines = [f"{kind}: {'ok' if rep.ok else 'FAIL'}"]
    if rep.waivers:
        lines.append("waivers: " + ",".join(sorted({w.code for w in rep.waivers})))
    emit(cfg, f"space check {kind}", rep, lines)
    return 0 if rep.ok else 1


def cmd_suite(args: argparse.Namespace, cfg: RunConfig) -> int:
    scfg = SuiteConfig(seed=cfg.seed, coding=cfg.coding,
                       budget=cfg.budget, depth=cfg.depth)
    try:
        rep = run_suite(args.name, scfg)
    except KeyError:
        print(f"error: unknown suite {args.name!r}; known: "
              + ", ".join(sorted(SUITES)), file=sys.stderr)
        return 2
    d = rep.details
    lines = [f"suite {args.name}: {'ok' if rep.ok else 'FAIL'} "
             f"passed={d['passed']} failed={d['failed']} "
             f"reported={d['reported']}"]
    for case in d["cases"]:
        if not case.get("ok"):
            lines.append(f"  FAIL {case.get('name', '?')}")
    emit(cfg, f"suite {args.name}", rep, lines)
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# Argument surface.

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schedule", help="inline m=..;n=.., file path, or paper:K")
    common.add_argument("--vector", help="vector literal idx:val,idx:val,...")
    common.add_argument("--set", help="comma-separated ordinal literals")
    common.add_argument("--p", type=int, help="closure parameter")
    common.add_argument("--bound", help="ordinal universe bound")
    common.add_argument("--depth", type=int, help="search depth")
    common.add_argument("--budget", type=int, help="enumeration budget")
    common.add_argument("--seed", type=int, help="fuzz-suite seed")
    common.add_argument("--format", choices=("text", "json", "csv"))
    common.add_argument("--coding", choices=("strict", "toy"))
    common.add_argument("--unconditional", action="store_const", const=True,
                        help="admit the set-restriction variant")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhonorm",
        description="Exact-rational norms, rho calculus, and invariant suites.")
    common = _common()
    subs = parser.add_subparsers(dest="command", required=True)

    p_norm = subs.add_parser("norm", parents=[common],
                             help="evaluate a norm of a vector")
    p_norm.add_argument("target",
                        choices=("tsirelson", "w", "james", "k-bounds"))
    p_norm.set_defaults(func=cmd_norm)

    p_rho = subs.add_parser("rho", parents=[common],
                            help="rho tables, closures, and certificates")
    p_rho.add_argument("sub",
                       choices=("table", "closure", "axioms", "universal",
                                "smooth"))
    p_rho.add_argument("--queue", help="model queue file (JSON array)")
    p_rho.set_defaults(func=cmd_rho)

    p_special = subs.add_parser("special", parents=[common],
                                help="special-sequence builder and interference")
    p_special.add_argument("sub", choices=("build", "interfere"))
    p_special.set_defaults(func=cmd_special)

    p_space = subs.add_parser("space", parents=[common],
                              help="norm bounds and structural checks")
    p_space.add_argument("sub", choices=("norm-bounds", "demo-hi", "check"))
    p_space.add_argument("kind", nargs="?",
                         choices=("ris", "exact-pair", "dependent", "tree"))
    p_space.set_defaults(func=cmd_space)

    p_suite = subs.add_parser("suite", parents=[common],
                              help="run a named invariant suite")
    p_suite.add_argument("name")
    p_suite.set_defaults(func=cmd_suite)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except (CliError, OrdinalParseError, ScheduleError, RhoError, CodingError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
