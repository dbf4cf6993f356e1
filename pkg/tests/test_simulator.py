import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pkg_balance.core import RunConfig, UsageError
from pkg_balance.estimation import EstimatorKind
from pkg_balance.hashing import HashFamily
from pkg_balance.partitioners import PartitionerKind
from pkg_balance.simulator import (
    SourceSplitMode,
    compare,
    heavy_key_check,
    heavy_key_threshold,
    replay,
    run,
    source_assignment,
    theory_check,
)
from pkg_balance.workload import KeyStream, Uniform, Zipf, generate, powerlaw_edges

ALL = list(PartitionerKind)
SKEWED = generate(Zipf(1.2, 2000, 30_000, seed=1))


@pytest.mark.parametrize("kind", ALL)
def test_single_worker_is_balanced(kind):
    res = run(RunConfig(1, 2, 2, 1, sample_interval=7), kind, Uniform(8, 1000, 1))
    assert np.all(res.series.imbalance == 0)


def test_sg_pigeonhole():
    res = run(RunConfig(4, 1), PartitionerKind.SG, Uniform(8, 10_000, 0))
    assert res.final_imbalance <= 1 - 1 / 4


@pytest.mark.parametrize("kind", ALL)
def test_conservation_and_determinism(kind):
    cfg = RunConfig(7, 3, 2, 9, sample_interval=500)
    a = run(cfg, kind, SKEWED, keep_trace=True)
    b = run(cfg, kind, SKEWED, keep_trace=True)
    assert a.final_loads.sum() == len(SKEWED)
    assert np.array_equal(a.trace, b.trace)
    assert np.array_equal(a.series.imbalance, b.series.imbalance)


def test_sampling_grid():
    res = run(RunConfig(4, sample_interval=300), PartitionerKind.KG, Uniform(8, 1000, 0))
    assert res.series.t.tolist() == [300, 600, 900, 1000]
    res = run(RunConfig(4), PartitionerKind.KG, Uniform(8, 5000, 0))
    assert res.series.t[0] == 5 and res.series.t[-1] == 5000 and len(res.series) == 1000


@pytest.mark.parametrize("kind", ALL)
def test_replay_matches_series(kind):
    res = run(RunConfig(5, 2, 2, 3, sample_interval=123), kind, SKEWED, keep_trace=True)
    again = replay(res.trace, 5, res.series.t)
    assert np.array_equal(again.max_load, res.series.max_load)
    assert np.allclose(again.imbalance, res.series.imbalance)


@pytest.mark.parametrize("estimator", [EstimatorKind.GLOBAL, EstimatorKind.LOCAL])
def test_pkg_locality(estimator):
    cfg = RunConfig(10, 4, 2, 2)
    res = run(cfg, PartitionerKind.PKG, SKEWED, estimator, keep_trace=True)
    cands = HashFamily(10, 2, 2).choices_array(SKEWED.keys)
    assert np.all((res.trace == cands[:, 0]) | (res.trace == cands[:, 1]))
    pairs = np.unique(np.stack([SKEWED.keys, res.trace], axis=1), axis=0)
    assert np.bincount(pairs[:, 0]).max() <= 2


def test_pkg_splits_hot_key():
    res = run(RunConfig(10, 1, 2, 3), PartitionerKind.PKG, SKEWED, keep_trace=True)
    c = HashFamily(10, 2, 3).choices(1)
    assert c[0] != c[1]
    assert len(set(res.trace[SKEWED.keys == 1].tolist())) == 2


@pytest.mark.parametrize("kind", [PartitionerKind.KG, PartitionerKind.POTC_STATIC,
                                  PartitionerKind.ON_GREEDY, PartitionerKind.OFF_GREEDY])
def test_whole_key_policies_use_one_worker(kind):
    res = run(RunConfig(10, 3, 2, 2), kind, SKEWED, keep_trace=True)
    pairs = np.unique(np.stack([SKEWED.keys, res.trace], axis=1), axis=0)
    assert np.bincount(pairs[:, 0]).max() == 1


def test_compare():
    cfg = RunConfig(8, 1, 2, 0)
    a = run(cfg, PartitionerKind.KG, SKEWED, keep_trace=True)
    b = run(RunConfig(8, 1, 2, 1), PartitionerKind.KG, SKEWED, keep_trace=True)
    m = compare([a, a, b])
    assert m[0, 1] == 1.0 and m[0, 0] == 1.0
    assert m[0, 2] < 1.0 and m[0, 2] == m[2, 0]
    with pytest.raises(UsageError):
        compare([run(cfg, PartitionerKind.KG, SKEWED)])


def test_usage_errors():
    cfg = RunConfig(4)
    with pytest.raises(UsageError):
        run(cfg, PartitionerKind.KG, SKEWED, EstimatorKind.LOCAL)
    with pytest.raises(UsageError):
        run(cfg, PartitionerKind.SG, SKEWED, probe_period=10)
    with pytest.raises(UsageError):
        run(cfg, PartitionerKind.PKG, SKEWED, EstimatorKind.PROBING)
    with pytest.raises(UsageError):
        run(cfg, PartitionerKind.PKG, SKEWED, EstimatorKind.GLOBAL, probe_period=10)
    with pytest.raises(UsageError):
        theory_check([4], 2, [0])


def test_keyed_split_follows_source_key():
    src, dst = powerlaw_edges(2000, 300, 1.0, seed=0)
    stream = KeyStream(dst, source_keys=src)
    assign = source_assignment(stream, 4, SourceSplitMode.KEYED, 0)
    for v in np.unique(src)[:50]:
        assert np.unique(assign[src == v]).size == 1
    assert np.unique(assign).size == 4
    shuffled = source_assignment(stream, 4, SourceSplitMode.SHUFFLE, 0)
    assert shuffled[:8].tolist() == [0, 1, 2, 3, 0, 1, 2, 3]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=1, max_size=200), st.integers(1, 6),
       st.integers(1, 4), st.sampled_from(ALL), st.integers(0, 2**32))
def test_conservation_property(keys, W, S, kind, seed):
    res = run(RunConfig(W, S, 2, seed, sample_interval=3), kind, KeyStream(np.array(keys)),
              keep_trace=True)
    assert res.final_loads.sum() == len(keys)
    assert np.all(res.series.imbalance >= 0)
    assert np.array_equal(np.bincount(res.trace, minlength=W), res.final_loads)


def test_theory_check_small():
    rep = theory_check([16, 32], 2, [0, 1])
    assert len(rep.rows) == 4
    assert set(rep.medians) == {16, 32}
    assert rep.ratio > 0


def test_heavy_key_small():
    frac, bound = heavy_key_check(m=20_000, seed=1)
    assert bound == pytest.approx(0.15)
    assert frac >= heavy_key_threshold(0.5, 10, 20_000)
