import random

import pytest

from conftest import random_case
from generators import chain, cycle
from graph_core import peel, peeling_steps, sample_vertices
from trim_status import StatusArray
from verify_oracle import check_complete, check_sound, fixed_point_trim


def test_two_cycle(two_cycle):
    result = fixed_point_trim(two_cycle)
    assert result.dead_set == frozenset()
    assert result.rounds == 1
    assert result.peeling_rounds == 0


def test_chain(chain10):
    result = fixed_point_trim(chain10)
    assert result.dead_set == frozenset(range(10))
    assert result.rounds == 11
    assert result.peeling_rounds == peeling_steps(chain10)


def test_example_graph(fig_graph):
    result = fixed_point_trim(fig_graph)
    assert result.dead_set == frozenset(range(5))
    assert result.peeling_rounds == 4


def test_scan_order_is_irrelevant(fig_graph):
    order = list(range(5))
    random.Random(7).shuffle(order)
    assert fixed_point_trim(fig_graph, order=order) == fixed_point_trim(fig_graph)


def test_order_must_be_permutation(fig_graph):
    with pytest.raises(ValueError):
        fixed_point_trim(fig_graph, order=[0, 1, 2])


def test_initial_status():
    result = fixed_point_trim(cycle(4), init=StatusArray(4, dead=[2]))
    assert result.dead_set == frozenset(range(4))


def test_sound_and_complete():
    live_cycle = StatusArray(5)
    assert check_sound(cycle(5), live_cycle)
    assert check_complete(cycle(5), live_cycle)
    live_chain = StatusArray(5)
    assert check_sound(chain(5), live_chain)
    assert not check_complete(chain(5), live_chain)


def test_unsound_status():
    # vertex 0 DEAD while its successor is still LIVE
    assert not check_sound(chain(3), StatusArray(3, dead=[0]))


@pytest.mark.parametrize("sampled", [False, True])
@pytest.mark.parametrize("seed", range(40))
def test_vectorised_peel_agrees_with_rounds(seed, sampled):
    g = random_case(seed)
    init = sample_vertices(g, 0.7, seed) if sampled else None
    oracle = fixed_point_trim(g, init)
    result = peel(g, init=init)
    assert result.alpha == oracle.peeling_rounds
    assert result.status.dead_set() == oracle.dead_set
