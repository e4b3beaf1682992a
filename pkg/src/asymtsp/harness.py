"""Experiment harness: asymmetry statistics, beta selection by fraction of
asymmetric pairs, parameter sweeps and CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AsymTSPError
from .exact import HELD_KARP_LIMIT
from .gen_christofides import gc_solve
from .gen_treedouble import gtd_solve
from .instance import BETA_INF, ZERO_SUBSTITUTE, Instance, asymmetric_pair_factors, asymmetry_report
from .metric import metric_closure
from .report import ALGORITHMS, ALIASES, RunReport
from .tsplib import OptimaRegistry, read_tsplib, reference_optimum

DEFAULT_FRACTIONS = (Fraction(1), Fraction(1, 4), Fraction(1, 16), Fraction(1, 64), Fraction(0))
CSV_COLUMNS = (
    "instance",
    "algorithm",
    "fraction",
    "beta",
    "kernel_size",
    "tour_cost",
    "reference",
    "ref_source",
    "ratio",
    "wall_time_ms",
    "seed",
    "root",
)


def load_instance(path: str | Path, closure: bool = True) -> Instance:
    inst = read_tsplib(path)
    return metric_closure(inst) if closure else inst


def _factor_key(f: Fraction | None) -> Fraction | float:
    return math.inf if f is None else f


def beta_from_fraction(
    instance: Instance, p, zero_substitute: Fraction | None = ZERO_SUBSTITUTE
) -> tuple[Fraction | float, Fraction]:
    """Largest beta keeping at least ``ceil(p * A)`` of the A asymmetric pairs.

    Returns ``(beta, realized)`` where ``realized`` is the share of
    asymmetric pairs whose factor exceeds beta.  Pairs tied with the last
    one needed are all kept, so ``realized`` can exceed ``p``.  beta is
    chosen among 1 and the factors that occur.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    if p == 0:
        return BETA_INF, Fraction(0)
    factors = sorted((_factor_key(f.factor) for f in asymmetric_pair_factors(instance, zero_substitute)), reverse=True)
    if not factors:
        return Fraction(1), Fraction(0)
    need = math.ceil(p * len(factors))
    threshold = factors[need - 1]
    below = [f for f in factors if f < threshold]
    beta = max(below[0], Fraction(1)) if below else Fraction(1)
    kept = sum(1 for f in factors if f > beta)
    return beta, Fraction(kept, len(factors))


@dataclass(frozen=True)
class SweepOptions:
    kernel_limit: int = HELD_KARP_LIMIT
    root: int | str = 0
    cover_mode: str = "exact"
    zero_substitute: Fraction | None = ZERO_SUBSTITUTE
    exact_limit: int = 16
    use_registry: bool = True
    record_time: bool = False
    threads: int | None = None


def canonical_algorithm(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}")
    return name


def run_one(
    instance: Instance,
    algorithm: str,
    fraction=None,
    beta=None,
    options: SweepOptions = SweepOptions(),
    reference: tuple | None = None,
    raise_errors: bool = False,
) -> RunReport:
    """One solver run; library errors are captured in the report unless
    ``raise_errors`` is set."""
    algorithm = canonical_algorithm(algorithm)
    if fraction is not None:
        beta, realized = beta_from_fraction(instance, fraction, options.zero_substitute)
        fraction = Fraction(fraction)
    else:
        beta = BETA_INF if beta in (None, math.inf) else Fraction(beta)
        realized = None
    start = time.perf_counter()
    try:
        if algorithm == "gen-christofides":
            rep = gc_solve(
                instance,
                beta,
                cover_mode=options.cover_mode,
                kernel_limit=options.kernel_limit,
                zero_substitute=options.zero_substitute,
            )
        else:
            rep = gtd_solve(
                instance,
                beta,
                root=options.root,
                kernel_limit=options.kernel_limit,
                zero_substitute=options.zero_substitute,
            )
    except AsymTSPError as exc:
        if raise_errors:
            raise
        rep = RunReport(instance=instance.name, algorithm=algorithm, beta=beta, error=f"{type(exc).__name__}: {exc}")
    elapsed = (time.perf_counter() - start) * 1000
    rep = replace(
        rep,
        fraction=fraction,
        asym_fraction=realized,
        wall_time_ms=round(elapsed, 3) if options.record_time else None,
    )
    if algorithm == "gen-treedouble" and rep.root is None and options.root != "best":
        rep = replace(rep, root=int(options.root))
    if reference is not None:
        rep = rep.with_reference(*reference)
    return rep


def _reference(instance: Instance, options: SweepOptions, registry: OptimaRegistry | None):
    return reference_optimum(instance, registry if options.use_registry else None, options.exact_limit)


def _task(args) -> RunReport:
    return run_one(*args)


def sort_key(r: RunReport):
    frac = -r.fraction if r.fraction is not None else Fraction(1)
    beta = math.inf if r.beta == BETA_INF else float(r.beta)
    return (r.instance, r.algorithm, frac, beta)


def sweep(
    instances: Sequence[Instance],
    fractions: Iterable = DEFAULT_FRACTIONS,
    algorithms: Iterable[str] = ALGORITHMS,
    options: SweepOptions = SweepOptions(),
    registry: OptimaRegistry | None = None,
) -> list[RunReport]:
    """All (instance, algorithm, fraction) combinations, sorted.

    Work is spread over a process pool whose size is capped by the
    ``ASYMTSP_THREADS`` environment variable; the output order does not
    depend on completion order.
    """
    fractions = [Fraction(f) for f in fractions]
    algorithms = [canonical_algorithm(a) for a in algorithms]
    if registry is None and options.use_registry:
        registry = OptimaRegistry.builtin()
    tasks = []
    for inst in instances:
        ref = _reference(inst, options, registry)
        for alg in algorithms:
            for p in fractions:
                tasks.append((inst, alg, p, None, options, ref))
    workers = options.threads or os.cpu_count() or 1
    cap = os.environ.get("ASYMTSP_THREADS")
    if cap:
        workers = min(workers, int(cap))
    workers = max(1, min(workers, len(tasks)))
    if workers == 1:
        results = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    return sorted(results, key=sort_key)


# --- output --------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "inf" if x == math.inf else repr(x)
    return str(x)


def _ratio(r: Fraction | None) -> str:
    return "" if r is None else f"{float(r):.6f}"


def csv_row(r: RunReport) -> dict[str, str]:
    return {
        "instance": r.instance,
        "algorithm": r.algorithm,
        "fraction": _fmt(r.fraction),
        "beta": _fmt(r.beta),
        "kernel_size": "" if r.error else str(r.kernel_size),
        "tour_cost": _fmt(r.tour_cost),
        "reference": _fmt(r.reference),
        "ref_source": _fmt(r.ref_source),
        "ratio": _ratio(r.ratio),
        "wall_time_ms": "" if r.wall_time_ms is None else f"{r.wall_time_ms:.3f}",
        "seed": _fmt(r.seed),
        "root": _fmt(r.root),
    }


def _json_value(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, float) and x == math.inf:
        return "inf"
    if isinstance(x, tuple):
        return list(x)
    return x


def json_record(r: RunReport) -> dict:
    out = {k: _json_value(v) for k, v in asdict(r).items()}
    out["ratio"] = None if r.ratio is None else round(float(r.ratio), 6)
    return out


def emit(reports: Sequence[RunReport], fmt: str = "csv", destination: str | Path | None = None) -> bytes:
    reports = sorted(reports, key=sort_key)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in reports:
            w.writerow(csv_row(r))
        data = buf.getvalue().encode()
    elif fmt == "json":
        data = (json.dumps([json_record(r) for r in reports], indent=2) + "\n").encode()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination is not None:
        Path(destination).write_bytes(data)
    return data


def ingest_csv(data: bytes | str) -> list[dict[str, str]]:
    text = data.decode() if isinstance(data, bytes) else data
    return list(csv.DictReader(io.StringIO(text)))


def pivot(rows: Sequence[dict[str, str]]) -> tuple[list[str], list[list[str]]]:
    """Instance x fraction table with ``kernel/ratio`` cells, one block per algorithm.

    ``rows`` are CSV records (see :func:`ingest_csv`).  Returns the header
    and the table rows; columns follow descending fraction.
    """
    fracs = sorted({Fraction(r["fraction"]) for r in rows if r["fraction"]}, reverse=True)
    header = ["instance", "algorithm"] + [f"{float(f) * 100:.2f}%" for f in fracs]
    cells: dict[tuple[str, str], dict[Fraction, str]] = {}
    for r in rows:
        if not r["fraction"]:
            continue
        key = (r["instance"], r["algorithm"])
        ratio = f"{float(r['ratio']):.2f}" if r["ratio"] else "-"
        kernel = r["kernel_size"] or "-"
        cells.setdefault(key, {})[Fraction(r["fraction"])] = f"{kernel}/{ratio}"
    table = [[inst, alg] + [cells[(inst, alg)].get(f, "") for f in fracs] for inst, alg in sorted(cells)]
    return header, table


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(line, widths)).rstrip() for line in [header, *rows]]
    return "\n".join(lines) + "\n"


def analyze_row(instance: Instance, zero_substitute: Fraction | None = None) -> dict[str, str]:
    """Asymmetry statistics: symmetric-pair share, median/max factor, zero-cost share."""
    rep = asymmetry_report(instance, zero_substitute)

    def num(x):
        return "-" if x is None else f"{float(x):.2f}"

    return {
        "instance": instance.name,
        "n": str(instance.n),
        "symmetric": f"{float(rep.symmetric_pair_fraction) * 100:.0f}%",
        "median": num(rep.median_factor),
        "max": num(rep.max_factor),
        "zero": f"{float(rep.zero_cost_edge_fraction) * 100:.0f}%",
    }
