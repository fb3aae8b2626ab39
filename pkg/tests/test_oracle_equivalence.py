"""
Every engine, sequential and parallel, against the brute-force oracle on
the mixed random family from conftest.
"""
import pytest

from conftest import random_case
from graph_core import ImplicitGraph, transpose
from trim_ac3 import Ac3Options, trim_ac3
from trim_ac4 import Ac4Options, CounterInit, trim_ac4_par, trim_ac4_seq
from trim_ac6 import Ac6Options, trim_ac6_par, trim_ac6_seq
from verify_oracle import check_complete, check_sound, fixed_point_trim

WORKER_COUNTS = (1, 2, 4, 8)


def _engines(g):
    gt = transpose(g)
    yield "ac4-seq", trim_ac4_seq(g, gt)
    yield "ac6-seq", trim_ac6_seq(g)
    for p in WORKER_COUNTS:
        yield f"ac3 P={p}", trim_ac3(g, opts=Ac3Options(workers=p, chunk_size=8))
        yield f"ac4 P={p}", trim_ac4_par(g, gt, Ac4Options(p, 8, CounterInit.TRAVERSE))
        yield f"ac4star P={p}", trim_ac4_par(g, gt, Ac4Options(p, 8, CounterInit.OFFSET_DIFF))
        yield f"ac6 P={p}", trim_ac6_par(g, Ac6Options(workers=p, chunk_size=8))


def _check_graph(seed):
    g = random_case(seed)
    expected = fixed_point_trim(g).dead_set
    for name, result in _engines(g):
        assert result.dead_set() == expected, f"{name} on seed {seed}"
        assert check_sound(g, result.status), f"{name} unsound on seed {seed}"
        assert check_complete(g, result.status), f"{name} incomplete on seed {seed}"
        assert result.removed == len(expected)
        if result.supports is not None:
            assert result.supports.is_disjoint(), f"{name} overlapping support sets on seed {seed}"


@pytest.mark.parametrize("batch", range(10))
def test_random_graphs(batch):
    for seed in range(batch * 25, (batch + 1) * 25):
        _check_graph(seed)


@pytest.mark.slow
@pytest.mark.parametrize("batch", range(10, 40))
def test_random_graphs_full_sweep(batch):
    for seed in range(batch * 25, (batch + 1) * 25):
        _check_graph(seed)


@pytest.mark.parametrize("seed", range(5))
def test_implicit_engines(seed):
    g = random_case(seed)
    expected = fixed_point_trim(g).dead_set
    assert trim_ac3(ImplicitGraph.from_csr(g), opts=Ac3Options(workers=4)).dead_set() == expected
    assert trim_ac6_seq(ImplicitGraph.from_csr(g)).dead_set() == expected
    assert trim_ac6_par(ImplicitGraph.from_csr(g), Ac6Options(workers=4)).dead_set() == expected
