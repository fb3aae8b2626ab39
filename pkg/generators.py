"""
Synthetic graph generators.

All generators are deterministic for a fixed seed, produce directed
graphs without self-loops and drop duplicate edges, drawing replacements
until the requested edge count is reached.
"""
import logging
from typing import Tuple

import numpy as np

from graph_core import CsrGraph, GraphError

logger = logging.getLogger(__name__)


class InfeasibleGraphError(GraphError):
    pass


def _check_size(n: int, m: int):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m > n * (n - 1):
        raise InfeasibleGraphError(f"{m} distinct directed edges do not fit on {n} vertices without self-loops")


def _collect_unique(n: int, m: int, draw, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Call draw(rng, k) -> (src, dst) until m distinct non-loop edges are kept.

    Keeps the first occurrence of every edge in draw order, which makes the
    result a function of the seed alone.
    """
    keys = np.zeros(0, dtype=np.int64)
    rounds = 0
    while keys.size < m:
        need = m - keys.size
        src, dst = draw(rng, need + need // 8 + 16)
        ok = src != dst
        fresh = src[ok] * n + dst[ok]
        merged = np.concatenate([keys, fresh])
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)][:m]
        rounds += 1
    logger.debug(f"Collected {m} unique edges in {rounds} draw rounds")
    return keys // n, keys % n


def gen_er(n: int, m: int, seed: int) -> CsrGraph:
    """Erdős–Rényi G(n, m): m directed edges drawn uniformly."""
    _check_size(n, m)
    rng = np.random.default_rng(seed)

    def draw(r, k):
        return r.integers(0, n, size=k), r.integers(0, n, size=k)

    src, dst = _collect_unique(n, m, draw, rng)
    g = CsrGraph.from_edges(n, src, dst)
    logger.info(f"Generated ER graph n={n}, m={g.m}, seed={seed}")
    return g


def gen_ba(n: int, m: int, seed: int) -> CsrGraph:
    """Barabási–Albert preferential attachment.

    Vertex v (v >= 1) sends min(k, v) edges to distinct earlier vertices,
    k = max(1, m // n), chosen with probability proportional to degree.
    Every edge points backwards, so the result is acyclic.
    """
    _check_size(n, m)
    k = max(1, m // n) if m else 0
    rng = np.random.default_rng(seed)
    src = []
    dst = []
    # one entry per edge endpoint; sampling from it is degree-proportional.
    # Vertex 0 is seeded once so the first draw has something to pick.
    endpoints = [0]
    for v in range(1, n):
        want = min(k, v)
        if want == 0:
            continue
        chosen = set()
        while len(chosen) < want:
            for i in rng.integers(0, len(endpoints), size=2 * want).tolist():
                chosen.add(endpoints[i])
                if len(chosen) == want:
                    break
        for w in sorted(chosen):
            src.append(v)
            dst.append(w)
            endpoints.append(w)
        endpoints.extend([v] * want)
    g = CsrGraph.from_edges(n, src, dst)
    logger.info(f"Generated BA graph n={n}, m={g.m}, out-stubs={k}, seed={seed}")
    return g


def gen_rmat(n: int, m: int, seed: int, a: float = 0.57, b: float = 0.19, c: float = 0.19) -> CsrGraph:
    """R-MAT recursive quadrant selection on a 2^scale grid, ids >= n rejected."""
    _check_size(n, m)
    if min(a, b, c) < 0 or a + b + c > 1.0 + 1e-12:
        raise ValueError(f"R-MAT probabilities must be non-negative with a+b+c <= 1, got {(a, b, c)}")
    scale = max(1, int(np.ceil(np.log2(n)))) if n > 1 else 1
    rng = np.random.default_rng(seed)

    def draw(r, k):
        src = np.zeros(k, dtype=np.int64)
        dst = np.zeros(k, dtype=np.int64)
        for _ in range(scale):
            u = r.random(k)
            # quadrants: a = (0,0), b = (0,1), c = (1,0), d = (1,1)
            src_bit = u >= a + b
            dst_bit = ((u >= a) & (u < a + b)) | (u >= a + b + c)
            src = (src << 1) | src_bit
            dst = (dst << 1) | dst_bit
        ok = (src < n) & (dst < n)
        return src[ok], dst[ok]

    src, dst = _collect_unique(n, m, draw, rng)
    g = CsrGraph.from_edges(n, src, dst)
    logger.info(f"Generated RMAT graph n={n}, m={g.m}, (a,b,c)=({a},{b},{c}), seed={seed}")
    return g


def chain(n: int) -> CsrGraph:
    """0 -> 1 -> ... -> n-1."""
    src = np.arange(max(n - 1, 0), dtype=np.int64)
    return CsrGraph.from_edges(n, src, src + 1)


def cycle(n: int) -> CsrGraph:
    src = np.arange(n, dtype=np.int64)
    return CsrGraph.from_edges(n, src, (src + 1) % n)


def star(n: int, inward: bool = True) -> CsrGraph:
    """Vertex 0 joined to every other vertex; inward edges point at the hub."""
    leaves = np.arange(1, n, dtype=np.int64)
    hub = np.zeros(n - 1, dtype=np.int64)
    if inward:
        return CsrGraph.from_edges(n, leaves, hub)
    return CsrGraph.from_edges(n, hub, leaves)


def example_graph() -> CsrGraph:
    """Five-vertex walkthrough graph; vertex i here is v(i+1).

    Edges v1->v4, v1->v3, v3->v5, v3->v4, v4->v5, with v2 isolated.
    """
    return CsrGraph.from_edges(5, [0, 0, 2, 2, 3], [3, 2, 4, 3, 4])
