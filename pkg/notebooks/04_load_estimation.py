"""
Global, local and probing load estimates
========================================
"""

# %%
import numpy as np

from pkg_balance import EstimatorKind, PartitionerKind, RunConfig, run
from pkg_balance.core import imbalance
from pkg_balance.estimation import ProbeSchedule
from pkg_balance.simulator import compare
from pkg_balance.workload import LN1, LogNormal, generate

m = 200_000
stream = generate(LogNormal(*LN1, 16384, m, seed=1))
cfg = RunConfig(10, 5, 2, 1)

g = run(cfg, PartitionerKind.PKG, stream, EstimatorKind.GLOBAL, keep_trace=True)
loc = run(cfg, PartitionerKind.PKG, stream, EstimatorKind.LOCAL, keep_trace=True, keep_views=True)
lp = run(cfg, PartitionerKind.PKG, stream, probe_period=m // 10)
sync = run(cfg, PartitionerKind.PKG, stream, probe_period=m // 10,
           probe_schedule=ProbeSchedule.SYNCHRONIZED)
for name, r in [("G", g), ("L", loc), ("LP staggered", lp), ("LP synchronized", sync)]:
    print(f"{name:16s} {r.normalized_avg:.2e}")

# %% [markdown]
# Synchronized probes make every source see the same deficit at once and all
# of them pile onto it. Staggering the probes removes the herd.

# %%
print("G/L trace agreement:", round(compare([g, loc])[0, 1], 3))

# %% [markdown]
# The local vectors add up to the true loads, and the global imbalance never
# exceeds the sum of the per-source imbalances.

# %%
last = loc.local_views[-1]
print("sum of local views:", last.sum(axis=0).tolist())
print("true loads:        ", loc.final_loads.tolist())
print(imbalance(loc.final_loads.tolist()), "<=", sum(imbalance(v.tolist()) for v in last))
assert np.array_equal(last.sum(axis=0), loc.final_loads)
