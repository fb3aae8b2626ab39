"""
Shared fixtures. Also puts the flat top-level modules on sys.path.
"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from generators import chain, cycle, example_graph, gen_er, star  # noqa: E402
from graph_core import CsrGraph  # noqa: E402


def random_case(seed: int) -> CsrGraph:
    """One graph from the mixed family used by the oracle sweeps.

    Mostly ER graphs with up to 200 vertices and 0..4n edges, plus chains,
    cycles, stars and graphs with self-loops and duplicate edges.
    """
    rng = np.random.default_rng(seed)
    kind = seed % 10
    n = int(rng.integers(1, 201))
    if kind == 6:
        return chain(n)
    if kind == 7:
        return cycle(n)
    if kind == 8:
        return star(max(n, 2), inward=bool(rng.integers(0, 2)))
    if kind == 9:
        # arbitrary multigraph with self-loops
        m = int(rng.integers(0, 4 * n + 1))
        return CsrGraph.from_edges(n, rng.integers(0, n, size=m), rng.integers(0, n, size=m))
    m = int(rng.integers(0, 4 * n + 1))
    return gen_er(n, min(m, n * (n - 1)), seed)


@pytest.fixture
def fig_graph() -> CsrGraph:
    return example_graph()


@pytest.fixture
def two_cycle() -> CsrGraph:
    return CsrGraph.from_edges(2, [0, 1], [1, 0])


@pytest.fixture
def chain10() -> CsrGraph:
    return chain(10)
