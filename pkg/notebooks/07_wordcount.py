"""
Word count memory and aggregation cost
======================================

Workers keep partial counters and flush them to one aggregator every T
messages. Key grouping needs one counter per word, PKG at most two, shuffle
grouping up to one per worker.
"""

# %%
from pkg_balance import PartitionerKind, RunConfig
from pkg_balance.wordcount import memory_comparison, run_wordcount
from pkg_balance.workload import Zipf, generate

stream = generate(Zipf(1.1, 5000, 200_000, seed=0))
for row in memory_comparison(stream, [5, 10, 20, 50], sources=5):
    print(row)

# %% [markdown]
# With periodic flushes the records sent to the aggregator depend on how many
# counters are live at each flush.

# %%
for policy in (PartitionerKind.KG, PartitionerKind.PKG, PartitionerKind.SG):
    rep = run_wordcount(RunConfig(20, 5, 2, 0), policy, stream, period=10_000, k=3)
    print(f"{policy.value:4s} flush records {rep.flush_records:7d}  top-3 {rep.final_topk}")
