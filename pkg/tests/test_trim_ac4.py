import pytest

from conftest import random_case
from generators import cycle
from graph_core import CsrGraph, GraphValidationError, ImplicitGraph, transpose
from trim_ac4 import Ac4Options, CounterInit, trim_ac4_par, trim_ac4_seq
from trim_status import CounterCorruptionError, StatusArray
from verify_oracle import check_complete, check_sound, fixed_point_trim


def _live_successor_counts(g, status):
    return [sum(1 for w in g.successors(v) if status.is_live(w)) for v in range(g.n)]


def test_two_cycle_enqueues_nothing(two_cycle):
    result = trim_ac4_seq(two_cycle, transpose(two_cycle))
    assert result.removed == 0
    assert result.metrics.max_qp == 0
    assert result.metrics.total_edges == 0
    assert result.metrics.sweeps_or_rounds == 0


def test_chain_one_decrement_per_edge(chain10):
    result = trim_ac4_seq(chain10, transpose(chain10))
    assert result.removed == 10
    assert result.metrics.total_edges == 9
    assert result.metrics.sweeps_or_rounds == 10


def test_example_graph(fig_graph):
    result = trim_ac4_seq(fig_graph, transpose(fig_graph))
    assert result.dead_set() == frozenset(range(5))
    assert result.metrics.total_edges == 5
    assert result.metrics.sweeps_or_rounds == 5


@pytest.mark.parametrize("seed", range(10))
def test_traverse_init_costs_exactly_m(seed):
    g = random_case(seed)
    gt = transpose(g)
    fast = trim_ac4_seq(g, gt, counter_init=CounterInit.OFFSET_DIFF)
    slow = trim_ac4_seq(g, gt, counter_init=CounterInit.TRAVERSE)
    assert slow.dead_set() == fast.dead_set()
    assert slow.metrics.total_edges - fast.metrics.total_edges == g.m


@pytest.mark.parametrize("workers", [1, 2, 4, 8])
@pytest.mark.parametrize("mode", list(CounterInit))
def test_parallel_matches_oracle(workers, mode):
    for seed in range(12):
        g = random_case(seed)
        result = trim_ac4_par(g, transpose(g), Ac4Options(workers, chunk_size=7, counter_init=mode))
        assert result.dead_set() == fixed_point_trim(g).dead_set
        assert check_sound(g, result.status) and check_complete(g, result.status)
        bound = g.m if mode is CounterInit.OFFSET_DIFF else 2 * g.m
        assert result.metrics.total_edges <= bound
        # quiescent counters equal the number of LIVE successors
        assert result.counters.to_numpy().tolist() == _live_successor_counts(g, result.status)
        assert result.metrics.sweeps_or_rounds == result.removed


def test_parallel_stable_on_example(fig_graph):
    gt = transpose(fig_graph)
    for _ in range(50):
        result = trim_ac4_par(fig_graph, gt, Ac4Options(workers=4, chunk_size=1))
        assert result.dead_set() == frozenset(range(5))


def test_dead_start_vertices_propagate():
    g = cycle(6)
    init = StatusArray(6, dead=[3])
    seq = trim_ac4_seq(g, transpose(g), init=init)
    par = trim_ac4_par(g, transpose(g), Ac4Options(workers=3, chunk_size=1), init=init)
    assert seq.dead_set() == par.dead_set() == fixed_point_trim(g, init).dead_set == frozenset(range(6))
    # the vertex dead at start is drained too
    assert seq.metrics.sweeps_or_rounds == par.metrics.sweeps_or_rounds == 6
    assert init.dead_count == 1


def test_implicit_graph_rejected(chain10):
    with pytest.raises(TypeError):
        trim_ac4_seq(ImplicitGraph.from_csr(chain10), transpose(chain10))


def test_transpose_shape_mismatch(chain10):
    with pytest.raises(GraphValidationError):
        trim_ac4_seq(chain10, transpose(cycle(10)))


def test_inconsistent_transpose_detected():
    g = CsrGraph.from_edges(3, [0, 2], [1, 1])
    wrong = CsrGraph.from_edges(3, [1, 1], [0, 0])
    with pytest.raises(CounterCorruptionError):
        trim_ac4_seq(g, wrong)
