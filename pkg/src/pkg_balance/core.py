"""Shared domain types and the load / imbalance metrics.

Time is the message index: message ``t`` is the ``t``-th key occurrence of a
run, and the load of a worker is the number of messages it has handled so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

# Loads are plain integer sequences (lists or integer numpy arrays), one entry
# per worker.
LoadVector = Sequence[int]


class UsageError(ValueError):
    """Raised on invalid arguments or invalid option combinations."""


class Message(NamedTuple):
    timestamp: int
    key: int


class ImbalanceSample(NamedTuple):
    timestamp: int
    imbalance: float
    max_load: int
    avg_load: float


@dataclass(frozen=True)
class RunConfig:
    workers: int
    sources: int = 1
    choices: int = 2
    master_seed: int = 0
    sample_interval: int | None = None

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")
        if self.sources < 1:
            raise UsageError(f"sources must be >= 1, got {self.sources}")
        if self.choices < 1:
            raise UsageError(f"choices must be >= 1, got {self.choices}")
        if self.sample_interval is not None and self.sample_interval < 1:
            raise UsageError(f"sample_interval must be >= 1, got {self.sample_interval}")

    def interval_for(self, m: int) -> int:
        """Sampling interval for a run of ``m`` messages (default ``max(1, m // 1000)``)."""
        if self.sample_interval is not None:
            return self.sample_interval
        return max(1, m // 1000)


def imbalance(loads: LoadVector) -> float:
    """Maximum load minus average load.

    The sum is exact in integer arithmetic; only the final division and
    subtraction happen in double precision.

    >>> imbalance([10, 0, 0, 0, 0])
    8.0
    """
    if len(loads) == 0:
        raise UsageError("imbalance of an empty load vector")
    total = int(sum(int(x) for x in loads))
    return float(max(loads)) - total / len(loads)


def sample(loads: LoadVector, timestamp: int) -> ImbalanceSample:
    total = int(sum(int(x) for x in loads))
    mx = int(max(loads))
    avg = total / len(loads)
    return ImbalanceSample(timestamp, mx - avg, mx, avg)


def record_route(loads: LoadVector, worker: int) -> list[int]:
    """Return a copy of ``loads`` with ``worker``'s entry incremented by one."""
    if not 0 <= worker < len(loads):
        raise UsageError(f"worker {worker} out of range [0, {len(loads)})")
    out = [int(x) for x in loads]
    out[worker] += 1
    return out


def agreement_fraction(a: Sequence[int], b: Sequence[int]) -> float:
    """Fraction of positions at which two routing traces send the message to the
    same worker.

    This is a positional agreement, not a set overlap: position ``t`` counts
    only if both traces chose the same destination for message ``t``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise UsageError(f"trace length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.size == 0:
        return 1.0
    return float(np.count_nonzero(a == b)) / a.size
