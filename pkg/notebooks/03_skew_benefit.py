"""
Load balance under skew
=======================

Normalized average imbalance (mean of max - avg load, over the stream
length) for every policy as the number of workers grows. 200k messages of
the LN1 log-normal workload, 5 sources.
"""

# %%
from pkg_balance import PartitionerKind, RunConfig, run
from pkg_balance.workload import LN1, LogNormal, generate

stream = generate(LogNormal(*LN1, 16384, 200_000, seed=0))
kinds = list(PartitionerKind)

print("W    " + "".join(f"{k.value:>11s}" for k in kinds))
for W in (5, 10, 20, 50):
    vals = [run(RunConfig(W, 5, 2, 0), k, stream).normalized_avg for k in kinds]
    print(f"{W:<5d}" + "".join(f"{v:11.2e}" for v in vals))

# %% [markdown]
# Key grouping is stuck with the hot key on one worker. Static PoTC and the
# greedy baselines also place whole keys. PKG splits the hot keys and stays
# close to shuffle grouping until W approaches 2/p1.
