"""
AC-6-based trimming.

Each LIVE vertex keeps exactly one LIVE successor as its support and sits
in that successor's supporting set. When a vertex dies, only the members
of its supporting set look for a new support, resuming their successor
scan where it stopped, so every edge slot is inspected at most once.
Works on implicit graphs: only successors are ever requested.
"""
import time
import random
import logging
from dataclasses import dataclass
from typing import List, Optional

from graph_core import Graph
from parallel import ChunkScheduler, check_workers, run_workers
from trim_config import ConfigurationError
from trim_metrics import TrimMetrics, TrimResult
from trim_status import EdgeCursor, StatusArray, SupportSets

logger = logging.getLogger(__name__)


@dataclass
class Ac6Options:
    workers: int = 1
    chunk_size: int = 4096

    def validate(self) -> "Ac6Options":
        check_workers(self.workers)
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        return self


@dataclass
class Ac6State:
    """Everything DoPost touches, shared by all workers of one run."""
    graph: Graph
    status: StatusArray
    supports: SupportSets
    cursor: EdgeCursor
    metrics: TrimMetrics
    locked: bool = True


def do_post(state: Ac6State, v: int, queue: List[int], p: int = 0):
    """Find v a LIVE support among its unscanned successors, or kill it.

    On success v's cursor moves past the consumed slot and only then does
    v join the support's set, so a worker that later drains that set
    resumes v's scan from the right place. With `state.locked`, insertion
    happens under the support's lock after re-checking its status, and v
    is killed under its own lock so no insertion into v's set can slip
    past the kill.
    """
    status = state.status
    supports = state.supports
    cursor = state.cursor
    tally = state.metrics.per_worker_edges
    inspected = 0
    for w in state.graph.successors(v, cursor[v]):
        inspected += 1
        if not status.is_live(w):
            continue
        if not state.locked:
            cursor.advance(v, inspected)
            tally[p] += inspected
            supports.add(w, v)
            return
        supports.lock(w)
        if status.is_live(w):
            cursor.advance(v, inspected)
            tally[p] += inspected
            supports.add(w, v)
            supports.unlock(w)
            return
        supports.unlock(w)
    cursor.advance(v, inspected)
    tally[p] += inspected

    if state.locked:
        supports.lock(v)
        killed = status.try_kill(v)
        supports.unlock(v)
    else:
        killed = status.try_kill(v)
    if killed:
        queue.append(v)
        state.metrics.note_queue(p, len(queue))


def _propagate(state: Ac6State, queue: List[int], p: int, rng: Optional[random.Random] = None) -> int:
    """Drain the waiting set; returns the number of entries popped."""
    popped = 0
    while queue:
        w = queue.pop()
        popped += 1
        # w is DEAD: nobody inserts into its set any more
        members = state.supports.take(w)
        if rng is not None:
            rng.shuffle(members)
        for u in members:
            do_post(state, u, queue, p)
    return popped


def trim_ac6_seq(g: Graph, init: Optional[StatusArray] = None, drain_seed: Optional[int] = None) -> TrimResult:
    """Visit vertices in id order; `drain_seed` shuffles each drained supporting set."""
    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    state = Ac6State(g, status, SupportSets(n), EdgeCursor(n), TrimMetrics.for_workers(1), locked=False)
    rng = random.Random(drain_seed) if drain_seed is not None else None
    logger.info(f"AC-6 sequential trim: n={n}")

    start = time.perf_counter()
    queue: List[int] = []
    steps = 0
    for v in range(n):
        if not status.is_live(v):
            continue
        do_post(state, v, queue, 0)
        steps += _propagate(state, queue, 0, rng)

    state.metrics.sweeps_or_rounds = steps
    state.metrics.finish(status.dead_count, time.perf_counter() - start)
    logger.info(f"AC-6 sequential done: removed={state.metrics.removed}, edges={state.metrics.total_edges}, "
                f"max |Q|={state.metrics.max_qp}, {state.metrics.wall_ms:.1f} ms")
    return TrimResult(status=status, metrics=state.metrics, supports=state.supports, cursor=state.cursor)


def trim_ac6_par(g: Graph, opts: Optional[Ac6Options] = None, init: Optional[StatusArray] = None,
                 supports: Optional[SupportSets] = None) -> TrimResult:
    """Parallel AC-6 with private waiting sets and per-vertex spin locks.

    `supports` may be passed in to substitute an instrumented lock.
    """
    opts = (opts or Ac6Options()).validate()
    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    if supports is None:
        supports = SupportSets(n)
    state = Ac6State(g, status, supports, EdgeCursor(n), TrimMetrics.for_workers(opts.workers), locked=True)
    scheduler = ChunkScheduler(n, opts.chunk_size)
    logger.info(f"AC-6 parallel trim: n={n}, P={opts.workers}, chunk={opts.chunk_size}")

    start = time.perf_counter()
    steps = [0] * opts.workers

    def trim(p: int):
        queue: List[int] = []
        for chunk in scheduler:
            for v in chunk:
                if not status.is_live(v):
                    continue
                do_post(state, v, queue, p)
                steps[p] += _propagate(state, queue, p)

    run_workers(opts.workers, trim, name="ac6")
    state.metrics.sweeps_or_rounds = sum(steps)
    state.metrics.finish(status.dead_count, time.perf_counter() - start)
    logger.info(f"AC-6 parallel done: removed={state.metrics.removed}, edges={state.metrics.total_edges}, "
                f"max |Q_p|={state.metrics.max_qp}, {state.metrics.wall_ms:.1f} ms")
    return TrimResult(status=status, metrics=state.metrics, supports=state.supports, cursor=state.cursor)
