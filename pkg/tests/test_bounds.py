import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cover_instance, tri3, two_tri
from pards.bounds import (BoundReport, base_bound, ceil_eps, make_partition, multi_lp,
                          should_tighten)
from pards.config import Config
from pards.graph import BipartiteInstance, ContractError
from pards.oracle import pds_optimum, random_pds


@pytest.mark.parametrize("x, expected", [(1.5, 2), (2.0000003, 2), (2.01, 3), (0.0, 0), (-1e-9, 0)])
def test_ceil_eps(x, expected):
    assert ceil_eps(x) == expected


def test_ceil_eps_rejects_negative():
    with pytest.raises(ContractError):
        ceil_eps(-0.5)


def test_base_bound_examples():
    r = base_bound(tri3())
    assert r.sol == pytest.approx(1.5) and r.lb == 2 and not r.tightened
    assert base_bound(BipartiteInstance.from_adjacency({0: set()})) == BoundReport(0.0, 0)
    one = base_bound(cover_instance({"a": {1, 2}}))
    assert one.sol == pytest.approx(1) and one.lb == 1


@pytest.mark.parametrize("n, k, sizes", [(7, 3, [2, 2, 3]), (6, 3, [2, 2, 2]), (5, 5, [1] * 5)])
def test_make_partition_sizes(n, k, sizes):
    fam = make_partition(list(range(n)), k, random.Random(0))
    assert sorted(len(g) for g in fam.groups) == sizes
    assert set().union(*fam.groups) == set(range(n))
    assert sum(len(g) for g in fam.groups) == n
    assert fam.k == k


def test_make_partition_deterministic_and_random():
    a = make_partition(list(range(10)), 3, random.Random(4))
    b = make_partition(list(range(10)), 3, random.Random(4))
    assert a == b
    seen = {make_partition(list(range(10)), 3, random.Random(s)).groups for s in range(20)}
    assert len(seen) > 1


def test_make_partition_contract():
    with pytest.raises(ContractError):
        make_partition([1, 2], 3, random.Random(0))
    with pytest.raises(ContractError):
        make_partition([1, 2], 0, random.Random(0))


def test_multi_lp_tri3_never_lifts():
    for seed in range(25):
        assert multi_lp(tri3(), 2, random.Random(seed)) == 2


def test_multi_lp_two_tri():
    h = two_tri()
    assert base_bound(h).lb == 3
    results = Counter(multi_lp(h, 3, random.Random(seed)) for seed in range(25))
    assert set(results) <= {3, 4}
    if results[4]:
        assert pds_optimum(h) == 4


@pytest.mark.parametrize("seed", [383, 1768])
def test_multi_lp_lifts_on_gap_instances(seed):
    # instances with optimum lb + 1 where some partitions prove the gap
    rng = random.Random(seed)
    h = random_pds(rng.randint(4, 12), rng.randint(4, 12), rng.uniform(0.15, 0.5), seed)
    lb = base_bound(h).lb
    assert pds_optimum(h) == lb + 1
    results = Counter(multi_lp(h, lb, random.Random(s)) for s in range(10))
    assert results[lb + 1] > 0 and set(results) <= {lb, lb + 1}


def test_multi_lp_skips_degenerate_calls():
    assert multi_lp(BipartiteInstance.from_adjacency({0: set()}), 0, random.Random(0)) == 0
    assert multi_lp(tri3(), 4, random.Random(0)) == 4


def test_multi_lp_full_size_is_sound():
    # ceil_sol == |UB| with a cover of that size: the all-ones point is feasible everywhere
    h = cover_instance({"a": {1}, "b": {2}, "c": {3}})
    assert multi_lp(h, 3, random.Random(1)) == 3


def test_multi_lp_counts():
    class Stats:
        lp_calls = multilp_calls = multilp_tightened = 0
    s = Stats()
    multi_lp(tri3(), 2, random.Random(0), s)
    assert s.multilp_calls == 1 and s.lp_calls == 2 and s.multilp_tightened == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(2, 10), st.floats(0.15, 0.6), st.integers(0, 10**6))
def test_multi_lp_sound_and_bracketed(n_ub, n_ud, density, seed):
    h = random_pds(n_ub, n_ud, density, seed)
    if not h.adj_ud:
        return
    opt = pds_optimum(h)
    lb = base_bound(h).lb
    for s in range(5):
        got = multi_lp(h, lb, random.Random(s))
        assert got in (lb, lb + 1)
        assert got <= opt
        if opt == lb:
            assert got == lb


class _Dense:
    """Stand-in with chosen |UB| and edge count for the density test."""

    def __init__(self, n, m):
        self.adj_ub = dict.fromkeys(range(n))
        self._m = m
        self.adj_ud = dict.fromkeys(range(n))

    def edge_count(self):
        return self._m


def test_should_tighten_examples():
    cfg = Config()
    dense = _Dense(30, 300)
    assert not should_tighten(10.05, 11, 0, 20, dense, cfg)  # r below the minimum
    assert not should_tighten(10.05, 11, 9, 20, dense, cfg)  # lb + r == q
    # lb + r < q and sol + r > q - 1.1 together need sol within 0.1 of lb
    assert should_tighten(10.95, 11, 9, 21, dense, cfg)
    assert not should_tighten(10.95, 11, 9, 21, _Dense(300, 300), cfg)  # too sparse
    assert not should_tighten(10.95, 11, 9, 21, dense, cfg.with_(multilp_min_r=10))


def test_should_tighten_gap_and_density_mode():
    cfg = Config()
    dense = _Dense(30, 300)
    # sol + r must exceed q - 1.1
    assert not should_tighten(9.5, 10, 9, 20, dense, cfg)
    assert should_tighten(9.95, 10, 9, 20, dense, cfg)
    assert not should_tighten(9.95, 10, 9, 20, dense, cfg.with_(multilp_gap=1.0))
    # with m = |UD| the same instance is too sparse
    assert not should_tighten(9.95, 10, 9, 20, dense, cfg.with_(multilp_density="ud"))
