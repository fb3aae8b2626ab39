"""
AC-4-based trimming: per-vertex remaining out-degree counters, decremented
along reverse edges whenever a successor dies. Needs the transposed graph,
so it only runs on explicit CSR graphs.
"""
import time
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from graph_core import CsrGraph, GraphValidationError
from parallel import ChunkScheduler, check_workers, run_workers
from trim_config import ConfigurationError
from trim_metrics import TrimMetrics, TrimResult
from trim_status import DegreeCounters, StatusArray

logger = logging.getLogger(__name__)


class CounterInit(str, Enum):
    TRAVERSE = "traverse"        # count successor slots one by one
    OFFSET_DIFF = "offset_diff"  # offsets[v+1] - offsets[v]


@dataclass
class Ac4Options:
    workers: int = 1
    chunk_size: int = 4096
    counter_init: CounterInit = CounterInit.OFFSET_DIFF

    def validate(self) -> "Ac4Options":
        check_workers(self.workers)
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        self.counter_init = CounterInit(self.counter_init)
        return self


def _check_shapes(g: CsrGraph, gt: CsrGraph):
    if not isinstance(g, CsrGraph) or not isinstance(gt, CsrGraph):
        raise TypeError("AC-4 trimming needs an explicit CsrGraph and its transpose")
    if g.n != gt.n or g.m != gt.m:
        raise GraphValidationError(f"transpose shape (n={gt.n}, m={gt.m}) does not match graph (n={g.n}, m={g.m})")


def _initial_counters(g: CsrGraph, mode: CounterInit, workers: int, chunk_size: int,
                      tally: List[int]) -> DegreeCounters:
    if mode is CounterInit.OFFSET_DIFF:
        return DegreeCounters(g.out_degrees())
    counts = np.zeros(g.n, dtype=np.int64)
    scheduler = ChunkScheduler(g.n, chunk_size)

    def count(p: int):
        for chunk in scheduler:
            for v in chunk:
                k = 0
                for _ in g.successors(v):
                    k += 1
                counts[v] = k
                tally[p] += k

    run_workers(workers, count, name="ac4-init")
    return DegreeCounters(counts)


def trim_ac4_seq(g: CsrGraph, gt: CsrGraph, init: Optional[StatusArray] = None,
                 counter_init: CounterInit = CounterInit.OFFSET_DIFF) -> TrimResult:
    """Single waiting set; each vertex is queued at most once."""
    _check_shapes(g, gt)
    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    pre_dead = status.flags().copy()
    metrics = TrimMetrics.for_workers(1)
    tally = metrics.per_worker_edges
    logger.info(f"AC-4 sequential trim: n={n}, m={g.m}, counter_init={CounterInit(counter_init).value}")

    start = time.perf_counter()
    counters = _initial_counters(g, CounterInit(counter_init), 1, max(n, 1), tally)
    queue: List[int] = []
    steps = 0
    for v in range(n):
        if pre_dead[v]:
            # dead from the start: its predecessors still count it
            queue.append(v)
        elif counters[v] == 0 and status.try_kill(v):
            queue.append(v)
        metrics.note_queue(0, len(queue))
        while queue:
            w = queue.pop()
            steps += 1
            for u in gt.successors(w):
                tally[0] += 1
                if counters.dec_degree(u) == 0 and status.try_kill(u):
                    queue.append(u)
                    metrics.note_queue(0, len(queue))

    metrics.sweeps_or_rounds = steps
    metrics.finish(status.dead_count, time.perf_counter() - start)
    logger.info(f"AC-4 sequential done: removed={metrics.removed}, edges={metrics.total_edges}, "
                f"max |Q|={metrics.max_qp}, {metrics.wall_ms:.1f} ms")
    return TrimResult(status=status, metrics=metrics, counters=counters)


def trim_ac4_par(g: CsrGraph, gt: CsrGraph, opts: Optional[Ac4Options] = None,
                 init: Optional[StatusArray] = None) -> TrimResult:
    """Workers pull vertex chunks and propagate through private waiting sets.

    A vertex reaches a waiting set only through a successful try_kill, so
    no two workers ever hold the same vertex.
    """
    opts = (opts or Ac4Options()).validate()
    _check_shapes(g, gt)
    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    pre_dead = status.flags().copy()
    metrics = TrimMetrics.for_workers(opts.workers)
    tally = metrics.per_worker_edges
    logger.info(f"AC-4 parallel trim: n={n}, m={g.m}, P={opts.workers}, chunk={opts.chunk_size}, "
                f"counter_init={opts.counter_init.value}")

    start = time.perf_counter()
    counters = _initial_counters(g, opts.counter_init, opts.workers, opts.chunk_size, tally)
    scheduler = ChunkScheduler(n, opts.chunk_size)
    steps = [0] * opts.workers

    def trim(p: int):
        for chunk in scheduler:
            for v in chunk:
                queue: List[int] = []
                if pre_dead[v]:
                    queue.append(v)
                elif counters[v] == 0 and status.try_kill(v):
                    queue.append(v)
                metrics.note_queue(p, len(queue))
                while queue:
                    w = queue.pop()
                    steps[p] += 1
                    for u in gt.successors(w):
                        tally[p] += 1
                        if counters.dec_degree(u) == 0 and status.try_kill(u):
                            queue.append(u)
                            metrics.note_queue(p, len(queue))

    run_workers(opts.workers, trim, name="ac4")
    metrics.sweeps_or_rounds = sum(steps)
    metrics.finish(status.dead_count, time.perf_counter() - start)
    logger.info(f"AC-4 parallel done: removed={metrics.removed}, edges={metrics.total_edges}, "
                f"max |Q_p|={metrics.max_qp}, {metrics.wall_ms:.1f} ms")
    return TrimResult(status=status, metrics=metrics, counters=counters)
