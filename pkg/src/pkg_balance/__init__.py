"""Partial key grouping and baseline stream partitioners, with a deterministic
simulator for worker load imbalance."""

from .core import (
    ImbalanceSample,
    Message,
    RunConfig,
    UsageError,
    agreement_fraction,
    imbalance,
    record_route,
)
from .estimation import EstimatorKind, GlobalOracle, LocalEstimator, ProbeSchedule, ProbingEstimator
from .hashing import HashFamily, derive_seeds
from .partitioners import PartitionerKind, off_greedy_assign
from .simulator import RunResult, SourceSplitMode, compare, run, theory_check
from .wordcount import memory_comparison, run_wordcount
from .workload import (
    Drift,
    FileSource,
    HeavyKey,
    IngestMode,
    KeyStream,
    LogNormal,
    Uniform,
    Zipf,
    empirical_frequencies,
    generate,
    ingest,
    parse_spec,
)

__version__ = "0.1.0"
