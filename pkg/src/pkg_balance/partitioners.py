"""Routing policies: key grouping, shuffle grouping, static power of two
choices, online and offline greedy, and partial key grouping.

Each policy is available as a plain function acting on explicit state and as
a router object with a common ``route(source, key, candidates)`` method used
by the simulator. ``candidates`` is the precomputed ``HashFamily.choices(key)``
for the message; policies that do not hash ignore it.

All argmins break ties by position: ``h_1``'s choice before ``h_2``'s, worker
0 before worker 1.
"""

from __future__ import annotations

import enum
import heapq
from typing import Mapping, MutableMapping, Sequence

from .core import LoadVector, UsageError
from .hashing import HashFamily


class PartitionerKind(enum.Enum):
    KG = "kg"
    SG = "sg"
    POTC_STATIC = "potc"
    ON_GREEDY = "ongreedy"
    OFF_GREEDY = "offgreedy"
    PKG = "pkg"


RoutingTable = MutableMapping[int, int]
KeyFrequencyTable = Mapping[int, int]


def argmin_among(loads: LoadVector, candidates: Sequence[int]) -> int:
    best = candidates[0]
    best_load = loads[best]
    for c in candidates[1:]:
        if loads[c] < best_load:
            best, best_load = c, loads[c]
    return best


def kg_route(family: HashFamily, key: int) -> int:
    return family.choices(key)[0]


def sg_route(counters: list[int], source: int, workers: int) -> int:
    """Round-robin: return ``counters[source] mod workers`` and advance the counter."""
    w = counters[source] % workers
    counters[source] += 1
    return w


def potc_static_route(family: HashFamily, key: int, table: RoutingTable,
                      global_loads: LoadVector) -> int:
    w = table.get(key)
    if w is None:
        w = argmin_among(global_loads, family.choices(key))
        table[key] = w
    return w


def on_greedy_route(key: int, table: RoutingTable, global_loads: LoadVector) -> int:
    w = table.get(key)
    if w is None:
        w = argmin_among(global_loads, range(len(global_loads)))
        table[key] = w
    return w


def off_greedy_assign(freqs: KeyFrequencyTable, workers: int) -> dict[int, int]:
    """Longest-processing-time assignment of whole keys to workers.

    Keys are taken by decreasing count (ties by ascending key id) and each
    goes to the worker with the least assigned weight so far (ties to the
    lowest worker index).
    """
    if workers < 1:
        raise UsageError(f"workers must be >= 1, got {workers}")
    heap = [(0, w) for w in range(workers)]
    table: dict[int, int] = {}
    for key, count in sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0])):
        weight, w = heapq.heappop(heap)
        table[key] = w
        heapq.heappush(heap, (weight + count, w))
    return table


def pkg_route(family: HashFamily, key: int, load_view: LoadVector) -> int:
    """Least loaded of the key's candidate workers under ``load_view``. No state
    is kept per key, so repeated keys may land on either candidate."""
    return argmin_among(load_view, family.choices(key))


# Router objects driven by the simulator. Global load views are the simulator's
# true load list, which it mutates in place.

class KeyGrouping:
    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        return candidates[0]


class ShuffleGrouping:
    def __init__(self, workers: int, sources: int):
        self.workers = workers
        self.counters = [0] * sources

    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        return sg_route(self.counters, source, self.workers)


class StaticPoTC:
    """Power of two choices pinned per key at first sight, with one shared
    table and exact global loads."""

    def __init__(self, global_loads: list[int]):
        self.loads = global_loads
        self.table: dict[int, int] = {}

    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        w = self.table.get(key)
        if w is None:
            w = argmin_among(self.loads, candidates)
            self.table[key] = w
        return w


class OnlineGreedy:
    def __init__(self, global_loads: list[int]):
        self.loads = global_loads
        self.table: dict[int, int] = {}

    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        w = self.table.get(key)
        if w is None:
            loads = self.loads
            w = loads.index(min(loads))
            self.table[key] = w
        return w


class OfflineGreedy:
    def __init__(self, table: Mapping[int, int]):
        self.table = table

    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        return self.table[key]


class PartialKeyGrouping:
    """Key splitting over the candidates, using one load view per source.

    ``views[j]`` is the list source ``j`` consults; with a global oracle every
    entry is the same true-load list.
    """

    def __init__(self, views: Sequence[list[int]]):
        self.views = views

    def route(self, source: int, key: int, candidates: Sequence[int]) -> int:
        view = self.views[source]
        if len(candidates) == 2:
            a, b = candidates
            return b if view[b] < view[a] else a
        return argmin_among(view, candidates)
