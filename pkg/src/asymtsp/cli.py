"""Command line interface.

Exit codes: 0 success, 1 other errors, 2 parse error, 3 capacity error,
4 validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .errors import AsymTSPError, ValidationError
from .exact import HELD_KARP_LIMIT
from .generators import gen_cycle_family, gen_gk, gen_random_metric, metric_lift
from .harness import (
    DEFAULT_FRACTIONS,
    SweepOptions,
    analyze_row,
    emit,
    format_table,
    ingest_csv,
    json_record,
    load_instance,
    pivot,
    run_one,
    sweep,
)
from .instance import ZERO_SUBSTITUTE, Tour, tour_cost
from .oracles import run_all
from .tsplib import OptimaRegistry, parse_tour, read_tsplib, reference_optimum, write_tour, write_tsplib


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if text.endswith("%"):
        return Fraction(text[:-1]) / 100
    return Fraction(text)


def parse_beta(text: str):
    if text.strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    b = Fraction(text)
    if b < 1:
        raise argparse.ArgumentTypeError("beta must be at least 1")
    return b


def parse_zero_substitute(text: str) -> Fraction | None:
    return None if text.lower() == "none" else Fraction(text)


def parse_root(text: str):
    return "best" if text == "best" else int(text)


def _out(data: bytes, path: str | None) -> None:
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _options(args) -> SweepOptions:
    return SweepOptions(
        kernel_limit=args.kernel_limit,
        root=args.root,
        cover_mode=getattr(args, "cover", "exact"),
        zero_substitute=args.zero_substitute,
        exact_limit=args.exact_limit,
        use_registry=not args.no_registry,
        record_time=args.record_time,
        threads=getattr(args, "threads", None),
    )


def cmd_analyze(args) -> int:
    rows = [analyze_row(read_tsplib(f), args.zero_substitute) for f in args.files]
    header = ["instance", "n", "symmetric", "median", "max", "zero"]
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        sys.stdout.write(format_table(header, [[r[h] for h in header] for r in rows]))
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.file, closure=not args.no_closure)
    opts = _options(args)
    registry = OptimaRegistry.builtin() if opts.use_registry else None
    ref = reference_optimum(inst, registry, opts.exact_limit)
    fraction = None if args.beta is not None else args.fraction
    rep = run_one(inst, args.alg, fraction, args.beta, opts, ref, raise_errors=True)
    if args.tour_out:
        Path(args.tour_out).write_bytes(write_tour(Tour(rep.tour), name=f"{rep.instance}.{rep.algorithm}"))
    if args.format == "json":
        sys.stdout.write(json.dumps(json_record(rep), indent=2) + "\n")
    else:
        sys.stdout.write(emit([rep], "csv").decode())
    return 0


def cmd_sweep(args) -> int:
    instances = [load_instance(f, closure=not args.no_closure) for f in args.files]
    reports = sweep(instances, args.fractions, args.algs, _options(args))
    data = emit(reports, args.format)
    if args.pivot:
        header, rows = pivot(ingest_csv(emit(reports, "csv")))
        data = format_table(header, rows).encode()
    _out(data, args.out)
    failed = [r for r in reports if r.error]
    for r in failed:
        sys.stderr.write(f"{r.instance} {r.algorithm} fraction={r.fraction}: {r.error}\n")
    return 0


def cmd_generate(args) -> int:
    if args.family == "gk":
        inst, _, _ = gen_gk(args.k)
    elif args.family == "cycle":
        inst, _, _ = gen_cycle_family(args.m)
    elif args.family == "random":
        inst = gen_random_metric(args.n, args.seed, parse_fraction(args.strength))
    else:
        inst, _ = metric_lift(read_tsplib(args.file))
    _out(write_tsplib(inst), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = load_instance(args.file, closure=args.closure)
    tour = parse_tour(Path(args.tour).read_bytes())
    if len(tour) != inst.n:
        raise ValidationError(f"tour has {len(tour)} vertices, instance has {inst.n}")
    cost = tour_cost(inst, tour)
    sys.stdout.write(f"{inst.name}: valid tour, cost {cost}\n")
    return 0


def cmd_oracle_check(args) -> int:
    ok = True
    for s in run_all(args.seeds):
        status = "ok" if s.ok else "MISMATCH"
        sys.stdout.write(f"{status:8} {s.name}: {s.cases} cases, {s.mismatches} mismatches\n")
        ok &= s.ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asymtsp", description="Parameterized approximation for metric ATSP.")
    sub = p.add_subparsers(dest="command", required=True)

    def run_flags(sp):
        sp.add_argument("--kernel-limit", type=int, default=HELD_KARP_LIMIT)
        sp.add_argument("--root", type=parse_root, default=0, help="MSA root, or 'best' to try all")
        sp.add_argument("--zero-substitute", type=parse_zero_substitute, default=ZERO_SUBSTITUTE)
        sp.add_argument("--exact-limit", type=int, default=16, help="largest n solved exactly for the reference")
        sp.add_argument("--no-registry", action="store_true", help="do not use the known-optima registry")
        sp.add_argument("--no-closure", action="store_true", help="do not take the metric closure of inputs")
        sp.add_argument("--record-time", action="store_true", help="fill wall_time_ms (breaks byte-identical output)")

    a = sub.add_parser("analyze", help="asymmetry statistics of TSPLIB files")
    a.add_argument("files", nargs="+")
    a.add_argument("--zero-substitute", type=parse_zero_substitute, default=None)
    a.add_argument("--format", choices=("table", "json"), default="table")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("solve", help="run one algorithm on one instance")
    s.add_argument("file")
    s.add_argument("--alg", choices=("gc", "gtd"), required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--fraction", type=parse_fraction, default=Fraction(1))
    g.add_argument("--beta", type=parse_beta, default=None)
    s.add_argument("--cover", choices=("exact", "approx"), default="exact")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--tour-out")
    run_flags(s)
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="run algorithms over instances and asymmetry fractions")
    w.add_argument("files", nargs="*")
    w.add_argument(
        "--fractions",
        type=lambda t: [parse_fraction(x) for x in t.split(",")],
        default=list(DEFAULT_FRACTIONS),
    )
    w.add_argument("--algs", type=lambda t: t.split(","), default=["gc", "gtd"])
    w.add_argument("--cover", choices=("exact", "approx"), default="exact")
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--pivot", action="store_true", help="print an instance x fraction table instead")
    w.add_argument("--threads", type=int, default=None)
    w.add_argument("--out")
    run_flags(w)
    w.set_defaults(func=cmd_sweep)

    gen = sub.add_parser("generate", help="write a generated instance as TSPLIB")
    gsub = gen.add_subparsers(dest="family", required=True)
    gk = gsub.add_parser("gk")
    gk.add_argument("--k", type=int, required=True)
    cy = gsub.add_parser("cycle")
    cy.add_argument("--m", type=int, required=True)
    rnd = gsub.add_parser("random")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--strength", default="0")
    lift = gsub.add_parser("lift")
    lift.add_argument("file")
    for sp in (gk, cy, rnd, lift):
        sp.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a TSPLIB tour file against an instance")
    v.add_argument("file")
    v.add_argument("tour")
    v.add_argument("--closure", action="store_true", help="cost the tour in the metric closure")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle-check", help="cross-check exact routines against exhaustive oracles")
    o.add_argument("--seeds", type=int, default=200)
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AsymTSPError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
