"""
Skewed sources and drifting keys
================================

Inverting a power-law edge list makes every message's worker key the
destination vertex and its source key the origin. Splitting by source key
gives each source a different slice of the key space.
"""

# %%
from pkg_balance import EstimatorKind, PartitionerKind, RunConfig, run
from pkg_balance.simulator import SourceSplitMode
from pkg_balance.workload import LN1, Drift, KeyStream, LogNormal, powerlaw_edges

src, dst = powerlaw_edges(100_000, 20_000, 1.0, seed=0)
stream = KeyStream(dst, source_keys=src)
cfg = RunConfig(10, 5, 2, 0)
for split in SourceSplitMode:
    r = run(cfg, PartitionerKind.PKG, stream, EstimatorKind.LOCAL, split=split)
    print(f"{split.value:8s} {r.normalized_avg:.2e}")

# %% [markdown]
# Drift: the hot keys change every m/20 messages. Local estimates carry no
# per-key state, so PKG does not care.

# %%
base = LogNormal(*LN1, 16384, 200_000, seed=0)
for spec in (base, Drift(base, 10_000)):
    r = run(cfg, PartitionerKind.PKG, spec, EstimatorKind.LOCAL)
    print(type(spec).__name__, f"{r.normalized_avg:.2e}")
