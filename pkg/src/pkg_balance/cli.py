"""Command-line front end. Every command writes CSV to stdout or ``--output``.

Exit codes: 0 success, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .core import RunConfig, UsageError
from .estimation import EstimatorKind, ProbeSchedule
from .partitioners import PartitionerKind
from .simulator import (RunResult, SourceSplitMode, heavy_key_check, heavy_key_threshold, run,
                        theory_check)
from .wordcount import run_wordcount
from .workload import Drift, FileSource, IngestError, IngestMode, KeyStream, generate, parse_spec

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

RUN_COLUMNS = ["run_id", "technique", "estimator", "W", "S", "d", "seed", "t",
               "imbalance", "imbalance_fraction", "max_load", "avg_load"]
THEORY_COLUMNS = ["row", "d", "n", "seed", "messages", "R", "imbalance_fraction", "bound", "flag"]
WORDCOUNT_COLUMNS = ["row", "policy", "W", "period", "t", "rank", "key", "count",
                     "peak_counters", "flush_records"]


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".9g")
    return "" if x is None else str(x)


def write_csv(rows: Sequence[Sequence], columns: Sequence[str], output: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    if output is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def load_workload(args) -> KeyStream:
    if (args.gen is None) == (args.input is None):
        raise UsageError("give exactly one of --gen or --input")
    if args.gen is not None:
        spec = parse_spec(args.gen, seed=args.seed)
        if args.messages is not None:
            if isinstance(spec, Drift):
                spec = dataclasses.replace(spec, base=dataclasses.replace(spec.base, messages=args.messages))
            else:
                spec = dataclasses.replace(spec, messages=args.messages)
        return generate(spec)
    stream = generate(FileSource(args.input, IngestMode(args.mode)))
    if args.messages is not None:
        stream = stream.head(args.messages)
    return stream


def add_workload_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", metavar="SPEC",
                   help="lognormal:MU,SIGMA,K,M[,iid|rounded] | zipf:S,K,M | uniform:K,M | "
                        "heavykey:P1,K,M | drift:EPOCH:(SPEC)")
    p.add_argument("--input", metavar="PATH")
    p.add_argument("--mode", choices=[m.value for m in IngestMode], default="lines")
    p.add_argument("--messages", type=int, help="override M of --gen, or truncate --input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", metavar="PATH")


def probe_period(args) -> float | None:
    if args.probe_minutes is not None:
        if args.messages_per_minute is None:
            raise UsageError("--probe-minutes needs --messages-per-minute")
        return args.probe_minutes * args.messages_per_minute
    return args.probe_period


def estimator_for(technique: PartitionerKind, args) -> EstimatorKind | None:
    if args.estimation is None:
        return None
    if technique is not PartitionerKind.PKG:
        raise UsageError(f"--estimation applies to pkg only, not {technique.value}")
    return EstimatorKind(args.estimation)


def run_rows(run_id: int, res: RunResult, seed: int) -> list[list]:
    c = res.config
    est = res.estimator.value if res.estimator is not None else ""
    rows = []
    for s in res.series:
        rows.append([run_id, res.kind.value, est, c.workers, c.sources, c.choices, seed,
                     s.timestamp, s.imbalance, s.imbalance / res.messages, s.max_load, s.avg_load])
    return rows


def _simulate_one(args, stream: KeyStream, technique: PartitionerKind, workers: int,
                  sources: int, seed: int, keep_trace: bool = False) -> RunResult:
    cfg = RunConfig(workers, sources, args.choices, seed, args.sample_interval)
    est = estimator_for(technique, args)
    period = probe_period(args) if technique is PartitionerKind.PKG else None
    if period is not None and est is None:
        est = EstimatorKind.LOCAL
    return run(cfg, technique, stream, est, probe_period=period,
               probe_schedule=ProbeSchedule(args.probe_schedule),
               split=SourceSplitMode(args.split), keep_trace=keep_trace)


def cmd_simulate(args) -> int:
    stream = load_workload(args)
    technique = PartitionerKind(args.partitioner)
    if probe_period(args) is not None and technique is not PartitionerKind.PKG:
        raise UsageError(f"probing applies to pkg only, not {technique.value}")
    res = _simulate_one(args, stream, technique, args.workers, args.sources, args.seed,
                        keep_trace=args.trace is not None)
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(map(str, res.trace.tolist())) + "\n")
    write_csv(run_rows(0, res, args.seed), RUN_COLUMNS, args.output)
    return EXIT_OK


def sweep_threads() -> int:
    raw = os.environ.get("PKG_BALANCE_THREADS")
    if not raw:
        return max(1, min(8, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PKG_BALANCE_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"PKG_BALANCE_THREADS must be >= 1, got {n}")
    return n


def cmd_sweep(args) -> int:
    techniques = [PartitionerKind(x) for x in args.partitioners.split(",")]
    for t in techniques:
        if t is not PartitionerKind.PKG and args.estimation is not None:
            raise UsageError(f"--estimation applies to pkg only, not {t.value}")
    jobs = [(t, w, s, seed) for t in techniques for w in args.workers
            for s in args.sources for seed in args.seeds]
    # one stream per seed; all runs of a seed share it read-only
    streams = {}
    for seed in args.seeds:
        ns = argparse.Namespace(**{**vars(args), "seed": seed})
        streams[seed] = load_workload(ns)
    with ThreadPoolExecutor(max_workers=sweep_threads()) as pool:
        futures = [pool.submit(_simulate_one, args, streams[seed], t, w, s, seed)
                   for (t, w, s, seed) in jobs]
        results = [f.result() for f in futures]
    rows = []
    for run_id, ((_, _, _, seed), res) in enumerate(zip(jobs, results)):
        rows.extend(run_rows(run_id, res, seed))
    rows.sort(key=lambda r: (r[0], r[7]))
    write_csv(rows, RUN_COLUMNS, args.output)
    return EXIT_OK


def cmd_theory_check(args) -> int:
    if args.heavykey is not None:
        n = args.n_list[0] if args.n_list else 10
        rows = []
        for seed in args.seeds:
            frac, bound = heavy_key_check(args.heavykey, args.keys, n, args.d, args.messages, seed)
            threshold = heavy_key_threshold(args.heavykey, n, args.messages)
            rows.append(["heavykey", args.d, n, seed, args.messages, "", frac, bound,
                         "ok" if frac >= threshold else "below-bound"])
        write_csv(rows, THEORY_COLUMNS, args.output)
        return EXIT_OK
    if any(n < 8 for n in args.n_list):
        raise UsageError("every n must be >= 8")
    report = theory_check(args.n_list, args.d, args.seeds)
    rows = [["run", args.d, n, seed, n * n, r, "", "", ""] for n, seed, r in report.rows]
    rows += [["median", args.d, n, "", n * n, r, "", "", ""] for n, r in report.medians.items()]
    rows.append(["ratio", args.d, "", "", "", report.ratio, "", "", ""])
    write_csv(rows, THEORY_COLUMNS, args.output)
    return EXIT_OK


def cmd_wordcount(args) -> int:
    stream = load_workload(args)
    policy = PartitionerKind(args.policy)
    period = None if args.period == 0 else args.period
    cfg = RunConfig(args.workers, args.sources, 2, args.seed)
    rep = run_wordcount(cfg, policy, stream, period, args.topk)
    m = len(stream)
    rows = [["summary", policy.value, args.workers, args.period, m, "", "", "",
             rep.peak_counters, rep.flush_records]]
    for rank, (key, count) in enumerate(rep.final_topk, start=1):
        rows.append(["topk", policy.value, args.workers, args.period, m, rank,
                     stream.label(key), count, "", ""])
    if args.per_flush:
        for fl in rep.flushes:
            rows.append(["flush", policy.value, args.workers, args.period, fl.t, "", "", "",
                         "", fl.records])
    write_csv(rows, WORDCOUNT_COLUMNS, args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    stream = load_workload(args)
    text = "\n".join(stream.label(k) for k in stream.keys.tolist()) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--choices", type=int, default=2)
    p.add_argument("--estimation", choices=["global", "local"])
    p.add_argument("--probe-period", type=float, help="messages between probes; implies local")
    p.add_argument("--probe-minutes", type=float)
    p.add_argument("--messages-per-minute", type=float)
    p.add_argument("--probe-schedule", choices=[s.value for s in ProbeSchedule],
                   default="staggered")
    p.add_argument("--split", choices=[s.value for s in SourceSplitMode], default="shuffle")
    p.add_argument("--sample-interval", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkg-balance", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in PartitionerKind]

    p = sub.add_parser("simulate", help="run one partitioner and emit the imbalance series")
    p.add_argument("--workers", type=int, required=True)
    p.add_argument("--sources", type=int, default=1)
    p.add_argument("--partitioner", choices=kinds, required=True)
    p.add_argument("--trace", metavar="PATH", help="write the routing trace, one worker per line")
    _add_run_args(p)
    add_workload_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a grid of partitioners, W, S and seeds")
    p.add_argument("--workers", type=int_list, required=True)
    p.add_argument("--sources", type=int_list, default=[1])
    p.add_argument("--partitioners", required=True, help="comma-separated, e.g. kg,pkg")
    p.add_argument("--seeds", type=int_list, default=[0])
    _add_run_args(p)
    add_workload_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theory-check", help="greedy-d scaling on uniform keys")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n-list", type=int_list, default=[16, 32, 64, 128])
    p.add_argument("--seeds", type=int_list, default=[0, 1, 2, 3, 4])
    p.add_argument("--heavykey", type=float, metavar="P1",
                   help="instead, check the heavy-key lower bound with this p1 (n from --n-list)")
    p.add_argument("--keys", type=int, default=10)
    p.add_argument("--messages", type=int, default=100_000)
    p.add_argument("--output", "-o", metavar="PATH")
    p.set_defaults(func=cmd_theory_check)

    p = sub.add_parser("wordcount", help="streaming top-k word count with counter accounting")
    p.add_argument("--policy", choices=["kg", "sg", "pkg"], required=True)
    p.add_argument("--workers", type=int, required=True)
    p.add_argument("--sources", type=int, default=1)
    p.add_argument("--period", type=int, default=0, help="messages between flushes; 0 = never")
    p.add_argument("--topk", type=int, default=10)
    p.add_argument("--per-flush", action="store_true")
    add_workload_args(p)
    p.set_defaults(func=cmd_wordcount)

    p = sub.add_parser("generate", help="write a generated key stream, one key per line")
    add_workload_args(p)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pkg-balance: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, OSError) as exc:
        print(f"pkg-balance: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
