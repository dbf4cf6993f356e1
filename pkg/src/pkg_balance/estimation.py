"""Load views for partial key grouping.

``GlobalOracle`` holds the true worker loads. ``LocalEstimator`` counts only
what its own source has sent, so summing the local vectors of all sources
gives the true loads back. ``ProbingEstimator`` is a local estimator that is
periodically overwritten with the true loads.
"""

from __future__ import annotations

import enum
import math

from .core import LoadVector, UsageError


class ProbeSchedule(enum.Enum):
    # Source j first probes at period * (j + 1) / S, then every period. Only
    # one source resets at a time.
    STAGGERED = "staggered"
    # Every source probes at the same instant. All sources then see the same
    # deficit and each tries to fill it with its own traffic, which
    # overshoots roughly (S - 1)-fold per period.
    SYNCHRONIZED = "synchronized"


def probe_phases(period: int, sources: int, schedule: "ProbeSchedule") -> list[int]:
    """Message index of each source's first probe."""
    if ProbeSchedule(schedule) is ProbeSchedule.SYNCHRONIZED:
        return [period] * sources
    return [max(1, period * (j + 1) // sources) for j in range(sources)]


class EstimatorKind(enum.Enum):
    GLOBAL = "global"
    LOCAL = "local"
    PROBING = "probing"


class GlobalOracle:
    def __init__(self, workers: int):
        self.loads = [0] * workers

    def view(self) -> list[int]:
        return self.loads

    def on_route(self, worker: int) -> None:
        _check(worker, len(self.loads))
        self.loads[worker] += 1


class LocalEstimator:
    def __init__(self, workers: int, source_id: int = 0):
        self.source_id = source_id
        self.local_loads = [0] * workers

    def view(self) -> list[int]:
        return self.local_loads

    def on_route(self, worker: int) -> None:
        _check(worker, len(self.local_loads))
        self.local_loads[worker] += 1


class ProbingEstimator(LocalEstimator):
    """Local estimator reset to the true loads every ``period`` messages.

    ``period`` counts global messages; ``None`` or ``math.inf`` never probes.
    The first probe falls due at message ``phase`` (default ``period``).
    """

    def __init__(self, workers: int, period: float | None, source_id: int = 0,
                 phase: int | None = None):
        super().__init__(workers, source_id)
        if period is not None and period < 1:
            raise UsageError(f"probe period must be >= 1, got {period}")
        self.period = math.inf if period is None else period
        self.last_probe = 0 if phase is None or not math.isfinite(self.period) else phase - self.period

    @property
    def next_probe(self) -> float:
        return self.last_probe + self.period

    def due(self, now: int) -> bool:
        return now - self.last_probe >= self.period

    def probe(self, true_loads: LoadVector, now: int) -> bool:
        """Overwrite the estimate with ``true_loads``; no-op when called before
        the period has elapsed. Returns whether the probe happened."""
        if not self.due(now):
            return False
        # in-place so routers holding this list see the update
        self.local_loads[:] = [int(x) for x in true_loads]
        self.last_probe = now
        return True


def _check(worker: int, workers: int) -> None:
    if not 0 <= worker < workers:
        raise UsageError(f"worker {worker} out of range [0, {workers})")
