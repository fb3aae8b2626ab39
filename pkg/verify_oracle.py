"""
Brute-force ground truth for trimming.

Whole-graph rounds over plain lists; no cursors or counters.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional

from graph_core import CsrGraph, Graph
from trim_status import StatusArray

logger = logging.getLogger(__name__)


@dataclass
class OracleResult:
    dead_set: FrozenSet[int]
    rounds: int

    @property
    def peeling_rounds(self) -> int:
        """Rounds that removed something (the final confirming round excluded)."""
        return self.rounds - 1


def _dead_flags(n: int, init: Optional[StatusArray]) -> List[bool]:
    if init is None:
        return [False] * n
    return [bool(x) for x in init.flags().tolist()]


def fixed_point_trim(g: Graph, init: Optional[StatusArray] = None, gt: Optional[CsrGraph] = None,
                     order: Optional[Iterable[int]] = None) -> OracleResult:
    """Repeat full scans until one kills nothing.

    Each round decides its removals from the statuses at the start of the
    round, so `rounds` is the peeling-step count plus the confirming scan.
    With `gt`, vertices without a LIVE predecessor are removed too.
    `order` only permutes the scan and never changes the result.
    """
    n = g.n
    dead = _dead_flags(n, init)
    post = [list(g.successors(v)) for v in range(n)]
    pre = [list(gt.successors(v)) for v in range(n)] if gt is not None else None
    scan = list(order) if order is not None else list(range(n))
    if sorted(scan) != list(range(n)):
        raise ValueError("order must be a permutation of the vertex ids")

    rounds = 0
    while True:
        rounds += 1
        doomed = []
        for v in scan:
            if dead[v]:
                continue
            if not any(not dead[w] for w in post[v]):
                doomed.append(v)
            elif pre is not None and not any(not dead[u] for u in pre[v]):
                doomed.append(v)
        if not doomed:
            break
        for v in doomed:
            dead[v] = True
    result = OracleResult(dead_set=frozenset(v for v in range(n) if dead[v]), rounds=rounds)
    logger.debug(f"Oracle: {len(result.dead_set)} dead after {rounds} rounds")
    return result


def check_sound(g: Graph, status: StatusArray) -> bool:
    """No DEAD vertex has a LIVE successor."""
    for v in range(g.n):
        if status.is_dead(v) and any(status.is_live(w) for w in g.successors(v)):
            logger.debug(f"Unsound: DEAD vertex {v} has a LIVE successor")
            return False
    return True


def check_complete(g: Graph, status: StatusArray) -> bool:
    """Every vertex whose successors are all DEAD is itself DEAD."""
    for v in range(g.n):
        if status.is_live(v) and not any(status.is_live(w) for w in g.successors(v)):
            logger.debug(f"Incomplete: LIVE vertex {v} has no LIVE successor")
            return False
    return True
