"""
Skewed workloads
================

Synthetic generators, the two log-normal constructions and drift.
"""

# %%
import numpy as np

from pkg_balance.workload import (LN1, LN2, Drift, HeavyKey, LogNormal, Zipf, generate,
                                  parse_spec, probabilities)

# %% [markdown]
# Top-key probability p1. The i.i.d. construction draws one log-normal weight
# per key; the rounded construction bins log-normal samples to integer keys.

# %%
for name, (mu, sigma), K in [("LN1", LN1, 16384), ("LN2", LN2, 1100)]:
    iid = [probabilities(LogNormal(mu, sigma, K, 1, seed=s))[0] for s in range(5)]
    rounded = probabilities(LogNormal(mu, sigma, K, 1, construction="rounded"))[0]
    print(f"{name}: iid p1 {np.round(iid, 4)}  rounded p1 {rounded:.4f}")

# %%
for spec in [Zipf(1.1, 1000, 1), HeavyKey(0.5, 10, 1)]:
    p = probabilities(spec)
    print(type(spec).__name__, "p1 = %.3f  p2 = %.3f" % (p[0], p[1]))

# %% [markdown]
# Drift rotates the rank-to-key map once per epoch, so the hot key moves
# while the shape of the distribution stays put.

# %%
spec = Drift(Zipf(1.2, 50, 40_000, seed=1), epoch=10_000)
keys = generate(spec).keys
for e in range(4):
    chunk = keys[e * 10_000:(e + 1) * 10_000]
    print("epoch", e, "hottest key", np.bincount(chunk).argmax())

# %%
print(parse_spec("drift:50000:(lognormal:1.789,2.366,16384,1e6)", seed=3))
