"""
AC-3-based trimming: repeated sweeps over all LIVE vertices, removing any
vertex without a LIVE successor, until a sweep changes nothing.
"""
import time
import logging
from dataclasses import dataclass
from typing import List, Optional

from graph_core import CsrGraph, Graph, ImplicitGraph
from parallel import ChunkScheduler, check_workers, run_workers
from trim_config import ConfigurationError
from trim_metrics import TrimMetrics, TrimResult
from trim_status import EdgeCursor, StatusArray

logger = logging.getLogger(__name__)


@dataclass
class Ac3Options:
    workers: int = 1
    chunk_size: int = 4096
    max_repetitions: Optional[int] = None
    check_in_degree: bool = False

    def validate(self, transpose: Optional[CsrGraph]) -> "Ac3Options":
        check_workers(self.workers)
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.max_repetitions is not None and self.max_repetitions < 1:
            raise ConfigurationError(f"max_repetitions must be >= 1, got {self.max_repetitions}")
        if self.check_in_degree and transpose is None:
            raise ConfigurationError("check_in_degree requires the transposed graph")
        return self


def zero_out_degree(g: Graph, status: StatusArray, cursor: EdgeCursor, v: int, tally: List[int], p: int = 0) -> bool:
    """True iff v has no LIVE successor.

    Successors found DEAD are skipped for good by moving v's cursor past
    them; the scan stops at the first LIVE one. Every inspected successor
    is added to tally[p].
    """
    inspected = 0
    found_live = False
    for w in g.successors(v, cursor[v]):
        inspected += 1
        if status.is_live(w):
            found_live = True
            break
    tally[p] += inspected
    cursor.advance(v, inspected - 1 if found_live else inspected)
    return not found_live


def trim_ac3(g: Graph, init: Optional[StatusArray] = None, opts: Optional[Ac3Options] = None,
             transpose: Optional[CsrGraph] = None) -> TrimResult:
    """Sweep until no vertex dies, or until `max_repetitions` sweeps have run.

    With check_in_degree, a LIVE vertex without a LIVE predecessor is
    removed as well.
    """
    opts = opts or Ac3Options()
    if opts.check_in_degree and isinstance(g, ImplicitGraph):
        logger.warning("check_in_degree ignored: implicit graphs expose no predecessors")
        opts = Ac3Options(opts.workers, opts.chunk_size, opts.max_repetitions, False)
        transpose = None
    opts.validate(transpose)
    if transpose is not None and (transpose.n != g.n):
        raise ConfigurationError(f"transpose has {transpose.n} vertices, graph has {g.n}")

    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    cursor = EdgeCursor(n)
    in_cursor = EdgeCursor(n) if opts.check_in_degree else None
    metrics = TrimMetrics.for_workers(opts.workers)
    tally = metrics.per_worker_edges
    logger.info(f"AC-3 trim: n={n}, P={opts.workers}, chunk={opts.chunk_size}, "
                f"max_repetitions={opts.max_repetitions}, check_in_degree={opts.check_in_degree}")

    start = time.perf_counter()
    sweeps = 0
    while True:
        # benign race: every writer stores True
        change = [False]
        scheduler = ChunkScheduler(n, opts.chunk_size)

        def sweep(p: int):
            for chunk in scheduler:
                for v in chunk:
                    if not status.is_live(v):
                        continue
                    dies = zero_out_degree(g, status, cursor, v, tally, p)
                    if not dies and in_cursor is not None:
                        # predecessors of v are its successors in the transpose
                        dies = zero_out_degree(transpose, status, in_cursor, v, tally, p)
                    if dies and status.try_kill(v):
                        change[0] = True

        run_workers(opts.workers, sweep, name="ac3")
        sweeps += 1
        logger.debug(f"AC-3 sweep {sweeps}: changed={change[0]}, dead={status.dead_count}")
        if not change[0]:
            break
        if opts.max_repetitions is not None and sweeps >= opts.max_repetitions:
            logger.info(f"AC-3 stopped after {sweeps} sweeps (cap reached)")
            break

    metrics.sweeps_or_rounds = sweeps
    metrics.finish(status.dead_count, time.perf_counter() - start)
    logger.info(f"AC-3 done: removed={metrics.removed}, sweeps={sweeps}, "
                f"edges={metrics.total_edges}, {metrics.wall_ms:.1f} ms")
    return TrimResult(status=status, metrics=metrics, cursor=cursor)
