"""Simulation of one partitioned edge: stream -> S sources -> W workers.

Every message is assigned to a source (round-robin or by hashing a
source-routing key), routed by that source to a worker, and counted on the
worker. Imbalance is sampled every ``sample_interval`` messages and after
the last message.
"""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from .core import ImbalanceSample, RunConfig, UsageError, agreement_fraction
from .estimation import EstimatorKind, LocalEstimator, ProbeSchedule, ProbingEstimator, probe_phases
from .hashing import HashFamily, hash_keys, split_seed
from .partitioners import (
    KeyGrouping,
    OfflineGreedy,
    OnlineGreedy,
    PartialKeyGrouping,
    PartitionerKind,
    ShuffleGrouping,
    StaticPoTC,
    off_greedy_assign,
)
from .workload import KeyStream, Uniform, HeavyKey, WorkloadSpec, empirical_frequencies, generate


class SourceSplitMode(enum.Enum):
    SHUFFLE = "shuffle"
    KEYED = "keyed"


@dataclass
class ImbalanceSeries:
    t: np.ndarray
    imbalance: np.ndarray
    max_load: np.ndarray
    avg_load: np.ndarray

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def __iter__(self) -> Iterator[ImbalanceSample]:
        for row in zip(self.t.tolist(), self.imbalance.tolist(),
                       self.max_load.tolist(), self.avg_load.tolist()):
            yield ImbalanceSample(*row)


@dataclass
class RunResult:
    config: RunConfig
    kind: PartitionerKind
    estimator: EstimatorKind | None
    messages: int
    series: ImbalanceSeries
    final_loads: np.ndarray
    trace: np.ndarray | None = None
    # (samples, S, W) local estimate vectors at each sample point, if requested
    local_views: np.ndarray | None = field(default=None, repr=False)

    @property
    def avg_imbalance(self) -> float:
        return float(np.mean(self.series.imbalance))

    @property
    def normalized_avg(self) -> float:
        return self.avg_imbalance / self.messages

    @property
    def final_imbalance(self) -> float:
        return float(self.series.imbalance[-1])


def source_assignment(stream: KeyStream, sources: int, split: SourceSplitMode,
                      master_seed: int) -> np.ndarray:
    m = len(stream)
    if split is SourceSplitMode.SHUFFLE:
        return np.arange(m, dtype=np.int64) % sources
    keys = stream.source_keys if stream.source_keys is not None else stream.keys
    return (hash_keys(split_seed(master_seed), keys) % np.uint64(sources)).astype(np.int64)


def _resolve_estimator(kind: PartitionerKind, estimator: EstimatorKind | None,
                       probe_period: float | None) -> EstimatorKind | None:
    if kind is not PartitionerKind.PKG:
        if estimator is not None or probe_period is not None:
            raise UsageError(f"load estimation applies to pkg only, not {kind.value}")
        return None
    if probe_period is not None:
        if estimator not in (None, EstimatorKind.PROBING, EstimatorKind.LOCAL):
            raise UsageError("probing requires local estimation")
        return EstimatorKind.PROBING
    return estimator or EstimatorKind.GLOBAL


def run(config: RunConfig, kind: PartitionerKind, workload: Union[WorkloadSpec, KeyStream],
        estimator: EstimatorKind | None = None, *, probe_period: float | None = None,
        probe_schedule: ProbeSchedule = ProbeSchedule.STAGGERED,
        split: SourceSplitMode = SourceSplitMode.SHUFFLE, keep_trace: bool = False,
        keep_views: bool = False) -> RunResult:
    """Simulate one run and return its imbalance series and final loads.

    ``estimator`` only applies to PKG (default: global oracle). A
    ``probe_period`` (in messages) turns on local estimation with probing.
    ``keep_views`` records each source's estimate vector at every sample point.
    """
    kind = PartitionerKind(kind)
    split = SourceSplitMode(split)
    if estimator is not None:
        estimator = EstimatorKind(estimator)
    estimator = _resolve_estimator(kind, estimator, probe_period)
    if estimator is EstimatorKind.PROBING and probe_period is None:
        raise UsageError("probing estimation needs a probe_period")

    stream = workload if isinstance(workload, KeyStream) else generate(workload)
    m = len(stream)
    if m == 0:
        raise UsageError("empty workload")
    W, S = config.workers, config.sources
    interval = config.interval_for(m)

    family = HashFamily(W, config.choices, config.master_seed)
    uniq, inv = np.unique(stream.keys, return_inverse=True)
    cands = [tuple(c) for c in family.choices_array(uniq).tolist()]
    inv = inv.ravel().tolist()
    keys = stream.keys.tolist()
    src = source_assignment(stream, S, split, config.master_seed).tolist()

    loads = [0] * W
    estimators: list[LocalEstimator] = []
    if kind is PartitionerKind.KG:
        router = KeyGrouping()
    elif kind is PartitionerKind.SG:
        router = ShuffleGrouping(W, S)
    elif kind is PartitionerKind.POTC_STATIC:
        router = StaticPoTC(loads)
    elif kind is PartitionerKind.ON_GREEDY:
        router = OnlineGreedy(loads)
    elif kind is PartitionerKind.OFF_GREEDY:
        router = OfflineGreedy(off_greedy_assign(empirical_frequencies(stream), W))
    else:
        if estimator is EstimatorKind.GLOBAL:
            router = PartialKeyGrouping([loads] * S)
        else:
            if estimator is EstimatorKind.PROBING:
                if math.isfinite(probe_period):
                    phases = probe_phases(int(probe_period), S, probe_schedule)
                else:
                    phases = [None] * S
                estimators = [ProbingEstimator(W, probe_period, j, phases[j]) for j in range(S)]
            else:
                estimators = [LocalEstimator(W, j) for j in range(S)]
            router = PartialKeyGrouping([e.local_loads for e in estimators])

    local = [e.local_loads for e in estimators]
    probing = estimator is EstimatorKind.PROBING and math.isfinite(probe_period)
    next_probe = int(min(e.next_probe for e in estimators)) if probing else -1
    record_views = keep_views and bool(estimators)

    route = router.route
    trace = [0] * m if keep_trace else None
    samples: list[tuple[int, int]] = []
    views: list[list[list[int]]] = []
    next_sample = interval

    for t in range(m):
        if t == next_probe:
            for e in estimators:
                e.probe(loads, t)
            next_probe = int(min(e.next_probe for e in estimators))
        s = src[t]
        w = route(s, keys[t], cands[inv[t]])
        loads[w] += 1
        if local:
            local[s][w] += 1
        if trace is not None:
            trace[t] = w
        if t + 1 == next_sample or t + 1 == m:
            samples.append((t + 1, max(loads)))
            if record_views:
                views.append([list(v) for v in local])
            next_sample += interval

    ts = np.array([x[0] for x in samples], dtype=np.int64)
    mx = np.array([x[1] for x in samples], dtype=np.int64)
    avg = ts / W
    series = ImbalanceSeries(ts, mx - avg, mx, avg)
    return RunResult(
        config=config,
        kind=kind,
        estimator=estimator,
        messages=m,
        series=series,
        final_loads=np.array(loads, dtype=np.int64),
        trace=None if trace is None else np.array(trace, dtype=np.int64),
        local_views=np.array(views, dtype=np.int64) if record_views else None,
    )


def replay(trace: np.ndarray, workers: int, timestamps: Sequence[int]) -> ImbalanceSeries:
    """Recompute the imbalance series at ``timestamps`` from a routing trace."""
    trace = np.asarray(trace)
    loads = np.zeros(workers, dtype=np.int64)
    prev = 0
    ts, mx = [], []
    for t in timestamps:
        loads += np.bincount(trace[prev:t], minlength=workers)
        prev = t
        ts.append(t)
        mx.append(int(loads.max()))
    ts_a = np.array(ts, dtype=np.int64)
    mx_a = np.array(mx, dtype=np.int64)
    avg = ts_a / workers
    return ImbalanceSeries(ts_a, mx_a - avg, mx_a, avg)


def compare(runs: Sequence[RunResult]) -> np.ndarray:
    """Pairwise positional agreement between the routing traces of ``runs``."""
    for r in runs:
        if r.trace is None:
            raise UsageError("compare needs runs made with keep_trace=True")
    n = len(runs)
    out = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = agreement_fraction(runs[i].trace, runs[j].trace)
    return out


@dataclass
class TheoryReport:
    d: int
    rows: list[tuple[int, int, float]]  # (n, seed, R = I(m) / (m / n))

    @property
    def medians(self) -> dict[int, float]:
        by_n: dict[int, list[float]] = {}
        for n, _, r in self.rows:
            by_n.setdefault(n, []).append(r)
        return {n: statistics.median(v) for n, v in sorted(by_n.items())}

    @property
    def ratio(self) -> float:
        """Median R at the largest n over median R at the smallest n."""
        med = self.medians
        ns = sorted(med)
        return med[ns[-1]] / med[ns[0]]


def greedy_d_imbalance(n: int, d: int, workload: Union[WorkloadSpec, KeyStream],
                       seed: int) -> tuple[float, int]:
    """Final imbalance and stream length of the greedy-d process with exact loads."""
    cfg = RunConfig(workers=n, sources=1, choices=d, master_seed=seed,
                    sample_interval=1 << 62)
    res = run(cfg, PartitionerKind.PKG, workload, EstimatorKind.GLOBAL)
    return res.final_imbalance, res.messages


def theory_check(n_values: Sequence[int], d: int, seeds: Sequence[int]) -> TheoryReport:
    """Greedy-d on a uniform distribution over ``5n`` keys with ``m = n^2``
    messages; records ``R(n) = I(m) / (m / n)`` per ``(n, seed)``."""
    rows = []
    for n in n_values:
        if n < 8:
            raise UsageError(f"n must be >= 8, got {n}")
        for seed in seeds:
            imb, m = greedy_d_imbalance(n, d, Uniform(5 * n, n * n, seed), seed)
            rows.append((n, seed, imb / (m / n)))
    return TheoryReport(d, rows)


def heavy_key_check(p1: float = 0.5, keys: int = 10, n: int = 10, d: int = 2,
                    m: int = 100_000, seed: int = 0) -> tuple[float, float]:
    """Normalized final imbalance ``I(m)/m`` under a heavy key, and the
    ``p1/2 - 1/n`` slope that any two-choice policy must exceed."""
    imb, m = greedy_d_imbalance(n, d, HeavyKey(p1, keys, m, seed), seed)
    return imb / m, p1 / 2 - 1 / n


def heavy_key_threshold(p1: float, n: int, m: int) -> float:
    """``p1/2 - 1/n`` less a ``3/sqrt(m)`` allowance for the key's sampling noise."""
    return p1 / 2 - 1 / n - 3 / math.sqrt(m)
