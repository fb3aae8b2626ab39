import logging

import pytest

from conftest import random_case
from generators import cycle
from graph_core import CsrGraph, ImplicitGraph, peeling_steps, transpose
from trim_ac3 import Ac3Options, trim_ac3, zero_out_degree
from trim_config import ConfigurationError
from trim_status import EdgeCursor, StatusArray
from verify_oracle import check_complete, check_sound, fixed_point_trim


@pytest.mark.parametrize("workers", [1, 2, 4])
def test_cycle_keeps_everything(workers):
    g = cycle(100)
    result = trim_ac3(g, opts=Ac3Options(workers=workers, chunk_size=16))
    assert result.removed == 0
    assert result.metrics.sweeps_or_rounds == 1
    assert result.metrics.total_edges == g.m
    assert result.metrics.max_edges_per_worker <= g.m


def test_chain_needs_alpha_plus_one_sweeps(chain10):
    result = trim_ac3(chain10)
    assert result.removed == 10
    assert result.metrics.sweeps_or_rounds == 11
    assert result.metrics.total_edges <= 11 * chain10.m


def test_example_graph_all_dead(fig_graph):
    result = trim_ac3(fig_graph)
    assert result.dead_set() == frozenset(range(5))


def test_zero_out_degree_skips_dead_prefix():
    g = CsrGraph.from_edges(4, [0, 0, 0], [1, 2, 3])
    status = StatusArray(4, dead=[1, 2])
    cursor = EdgeCursor(4)
    tally = [0]
    assert not zero_out_degree(g, status, cursor, 0, tally)
    assert cursor[0] == 2
    assert tally == [3]
    # the next scan starts at the LIVE successor
    assert not zero_out_degree(g, status, cursor, 0, tally)
    assert tally == [4]


def test_zero_out_degree_empty_and_self_loop():
    g = CsrGraph.from_edges(2, [1], [1])
    status = StatusArray(2)
    cursor = EdgeCursor(2)
    tally = [0]
    assert zero_out_degree(g, status, cursor, 0, tally)
    assert not zero_out_degree(g, status, cursor, 1, tally)


def test_self_loop_survives():
    g = CsrGraph.from_edges(3, [0, 1], [0, 2])
    result = trim_ac3(g)
    assert result.dead_set() == frozenset({1, 2})


def test_capped_run_is_subset(chain10):
    result = trim_ac3(chain10, opts=Ac3Options(max_repetitions=3))
    assert result.metrics.sweeps_or_rounds == 3
    assert result.dead_set() == frozenset({7, 8, 9})
    assert result.dead_set() <= fixed_point_trim(chain10).dead_set


def test_initial_status_is_respected():
    g = cycle(6)
    result = trim_ac3(g, init=StatusArray(6, dead=[3]))
    assert result.removed == 6


def test_in_degree_variant_matches_oracle():
    # cycle 0..4 with a source vertex 5 feeding it
    g = CsrGraph.from_edges(6, [0, 1, 2, 3, 4, 5], [1, 2, 3, 4, 0, 0])
    gt = transpose(g)
    plain = trim_ac3(g)
    assert plain.removed == 0
    result = trim_ac3(g, opts=Ac3Options(check_in_degree=True), transpose=gt)
    assert result.dead_set() == frozenset({5})
    assert result.dead_set() == fixed_point_trim(g, gt=gt).dead_set


@pytest.mark.parametrize("seed", range(20))
def test_in_degree_variant_random(seed):
    g = random_case(seed)
    gt = transpose(g)
    result = trim_ac3(g, opts=Ac3Options(workers=4, chunk_size=8, check_in_degree=True), transpose=gt)
    assert result.dead_set() == fixed_point_trim(g, gt=gt).dead_set


def test_in_degree_needs_transpose(chain10):
    with pytest.raises(ConfigurationError):
        trim_ac3(chain10, opts=Ac3Options(check_in_degree=True))


def test_in_degree_ignored_on_implicit_graph(chain10, caplog):
    ig = ImplicitGraph.from_csr(chain10)
    with caplog.at_level(logging.WARNING):
        result = trim_ac3(ig, opts=Ac3Options(check_in_degree=True))
    assert "check_in_degree ignored" in caplog.text
    assert result.removed == 10


def test_implicit_graph_counts_match_metrics():
    g = random_case(3)
    ig = ImplicitGraph.from_csr(g)
    result = trim_ac3(ig, opts=Ac3Options(workers=2, chunk_size=4))
    assert ig.traversed == result.metrics.total_edges
    assert result.dead_set() == fixed_point_trim(g).dead_set


@pytest.mark.parametrize("bad", [
    Ac3Options(workers=0),
    Ac3Options(chunk_size=0),
    Ac3Options(max_repetitions=0),
])
def test_invalid_options(bad, chain10):
    with pytest.raises(ConfigurationError):
        trim_ac3(chain10, opts=bad)


@pytest.mark.parametrize("workers", [1, 2, 4, 8])
@pytest.mark.parametrize("seed", range(0, 40, 3))
def test_matches_oracle_with_bounded_work(workers, seed):
    g = random_case(seed)
    result = trim_ac3(g, opts=Ac3Options(workers=workers, chunk_size=5))
    assert result.dead_set() == fixed_point_trim(g).dead_set
    assert check_sound(g, result.status) and check_complete(g, result.status)
    assert result.metrics.total_edges <= (peeling_steps(g) + 1) * g.m
