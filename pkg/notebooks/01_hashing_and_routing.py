"""
Hash choices and the six routing policies
==========================================

Every key gets ``d`` candidate workers from a seeded hash family. Key
grouping always takes the first, PKG takes the less loaded of the two.
"""

# %%
import numpy as np

from pkg_balance import HashFamily, PartitionerKind, RunConfig, run
from pkg_balance.workload import KeyStream

family = HashFamily(workers=8, d=2, master_seed=42)
for key in range(6):
    print(key, family.choices(key))

# %% [markdown]
# The vectorized path gives the same answer as the scalar one.

# %%
keys = np.arange(100_000)
table = family.choices_array(keys)
assert table[5].tolist() == family.choices(5)
print("h1 hit rate per worker:", np.bincount(table[:, 0], minlength=8) / keys.size)

# %% [markdown]
# Route one hot key with every policy. Whole-key policies pin it to one
# worker; PKG alternates between its two choices; shuffle grouping spreads it.

# %%
stream = KeyStream(np.array([7] * 12 + [1, 2, 3, 4]))
for kind in PartitionerKind:
    res = run(RunConfig(4, 1, 2, 1), kind, stream, keep_trace=True)
    print(f"{kind.value:10s} trace={res.trace.tolist()} loads={res.final_loads.tolist()}")
