"""Streaming top-k word count on the simulated topology.

Workers keep partial counters per key. Every ``period`` messages all partial
counters are flushed to a single aggregator and cleared; a final flush
happens at the end of the stream. The aggregator sums partials exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .core import RunConfig, UsageError
from .estimation import EstimatorKind
from .partitioners import PartitionerKind
from .simulator import run
from .workload import KeyStream, WorkloadSpec, generate

WORDCOUNT_POLICIES = (PartitionerKind.KG, PartitionerKind.SG, PartitionerKind.PKG)


@dataclass
class FlushRecord:
    t: int          # messages processed when the flush happened
    records: int    # (key, partial count) pairs sent; equals live counters before the flush


@dataclass
class AggregationReport:
    policy: PartitionerKind
    workers: int
    period: int | None
    flush_records: int
    peak_counters: int
    final_topk: list[tuple[int, int]]
    totals: dict[int, int] = field(repr=False)
    flushes: list[FlushRecord] = field(default_factory=list, repr=False)


def top_k(totals: dict[int, int], k: int) -> list[tuple[int, int]]:
    """The ``k`` largest counts, ties broken by ascending key."""
    return sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def count_partials(keys: Sequence[int], destinations: Sequence[int], workers: int,
                   period: int | None) -> tuple[dict[int, int], int, int, list[FlushRecord]]:
    """Replay a routing trace through per-worker partial counters.

    Returns aggregated totals, cumulative flush records, peak number of live
    counters, and one ``FlushRecord`` per flush.
    """
    stores: list[dict[int, int]] = [{} for _ in range(workers)]
    totals: dict[int, int] = {}
    live = peak = sent = 0
    flushes: list[FlushRecord] = []

    def flush(t: int) -> None:
        nonlocal live, sent
        for store in stores:
            for key, c in store.items():
                totals[key] = totals.get(key, 0) + c
            store.clear()
        flushes.append(FlushRecord(t, live))
        sent += live
        live = 0

    m = len(keys)
    for t, (key, w) in enumerate(zip(keys, destinations), start=1):
        store = stores[w]
        c = store.get(key)
        if c is None:
            store[key] = 1
            live += 1
            if live > peak:
                peak = live
        else:
            store[key] = c + 1
        if period is not None and t % period == 0 and t != m:
            flush(t)
    flush(m)
    return totals, sent, peak, flushes


def run_wordcount(config: RunConfig, policy: PartitionerKind,
                  workload: Union[WorkloadSpec, KeyStream], period: int | None = None,
                  k: int = 10, estimator: EstimatorKind | None = None) -> AggregationReport:
    """Route the stream with ``policy`` and account for counter memory and
    aggregation traffic. ``period=None`` never flushes before the end.

    PKG uses local load estimation unless ``estimator`` says otherwise.
    """
    policy = PartitionerKind(policy)
    if policy not in WORDCOUNT_POLICIES:
        raise UsageError(f"word count supports kg, sg and pkg, not {policy.value}")
    if period is not None and period <= 0:
        raise UsageError(f"aggregation period must be positive, got {period}")
    if k < 1:
        raise UsageError(f"top-k size must be >= 1, got {k}")
    stream = workload if isinstance(workload, KeyStream) else generate(workload)
    if policy is PartitionerKind.PKG and estimator is None:
        estimator = EstimatorKind.LOCAL
    res = run(config, policy, stream, estimator, keep_trace=True)
    totals, sent, peak, flushes = count_partials(
        stream.keys.tolist(), res.trace.tolist(), config.workers, period)
    return AggregationReport(policy, config.workers, period, sent, peak,
                             top_k(totals, k), totals, flushes)


def sequential_counts(keys: Iterable[int]) -> dict[int, int]:
    return dict(Counter(int(x) for x in keys))


def memory_comparison(workload: Union[WorkloadSpec, KeyStream], workers: Sequence[int],
                      policies: Sequence[PartitionerKind] = WORDCOUNT_POLICIES,
                      sources: int = 1, seed: int = 0) -> list[dict]:
    """Peak live counters and flush records per ``(policy, W)`` with no
    periodic aggregation."""
    stream = workload if isinstance(workload, KeyStream) else generate(workload)
    K = int(np.unique(stream.keys).size)
    rows = []
    for policy in policies:
        for W in workers:
            rep = run_wordcount(RunConfig(W, sources, 2, seed), policy, stream)
            rows.append({"policy": PartitionerKind(policy).value, "W": W, "K": K,
                         "peak_counters": rep.peak_counters,
                         "flush_records": rep.flush_records})
    return rows
