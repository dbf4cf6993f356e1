"""
Greedy-d scaling
================

Uniform keys (5n of them), m = n^2 messages, n bins. With d = 2 the
normalized imbalance R(n) = I(m) / (m/n) stays bounded. With d = 1 the
predicted growth is ln n / ln ln n, which changes by only about 13% between
n = 16 and n = 128, so seed noise can hide it at these sizes.
"""

# %%
import math

from pkg_balance.simulator import heavy_key_check, theory_check

ns = [16, 32, 64, 128]
for d in (1, 2):
    rep = theory_check(ns, d, list(range(10)))
    meds = ", ".join(f"{n}: {r:.3f}" for n, r in rep.medians.items())
    print(f"d={d}: {meds}  ratio {rep.ratio:.2f}")

print("ln n / ln ln n ratio:", round((math.log(128) / math.log(math.log(128)))
                                     / (math.log(16) / math.log(math.log(16))), 3))

# %% [markdown]
# A single key carrying half the stream cannot be spread over more than two
# bins, so I(m)/m stays at or above p1/2 - 1/n = 0.15.

# %%
for seed in range(5):
    frac, bound = heavy_key_check(p1=0.5, keys=10, n=10, m=100_000, seed=seed)
    print(seed, round(frac, 4), ">=", bound)
