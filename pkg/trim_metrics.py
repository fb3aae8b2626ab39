"""
Measurement records produced by every trim engine.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional

from trim_status import DegreeCounters, EdgeCursor, StatusArray, SupportSets


@dataclass
class TrimMetrics:
    """Counters for one engine run.

    per_worker_edges holds successor (or predecessor) inspections per
    worker; each inspection belongs to exactly one worker, so the sum is
    exact. sweeps_or_rounds counts AC-3 sweeps, or waiting-set entries
    drained by AC-4 and AC-6.
    """
    per_worker_edges: List[int]
    max_qp: int = 0
    wall_time: float = 0.0
    removed: int = 0
    sweeps_or_rounds: int = 0
    per_worker_qp: List[int] = field(default_factory=list)

    @classmethod
    def for_workers(cls, workers: int) -> "TrimMetrics":
        return cls(per_worker_edges=[0] * workers, per_worker_qp=[0] * workers)

    @property
    def workers(self) -> int:
        return len(self.per_worker_edges)

    @property
    def total_edges(self) -> int:
        return sum(self.per_worker_edges)

    @property
    def max_edges_per_worker(self) -> int:
        return max(self.per_worker_edges) if self.per_worker_edges else 0

    @property
    def wall_ms(self) -> float:
        return self.wall_time * 1000.0

    def note_queue(self, p: int, size: int):
        if size > self.per_worker_qp[p]:
            self.per_worker_qp[p] = size

    def finish(self, removed: int, wall_time: float):
        self.removed = removed
        self.wall_time = wall_time
        self.max_qp = max(self.per_worker_qp) if self.per_worker_qp else 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_edges_per_worker": self.max_edges_per_worker,
            "total_edges": self.total_edges,
            "max_qp": self.max_qp,
            "removed": self.removed,
            "wall_ms": round(self.wall_ms, 3),
            "sweeps_or_rounds": self.sweeps_or_rounds,
            "per_worker_edges": list(self.per_worker_edges),
        }


@dataclass
class TrimResult:
    """Final status plus the engine state left behind at quiescence."""
    status: StatusArray
    metrics: TrimMetrics
    counters: Optional[DegreeCounters] = None
    supports: Optional[SupportSets] = None
    cursor: Optional[EdgeCursor] = None

    def dead_set(self) -> FrozenSet[int]:
        return self.status.dead_set()

    @property
    def removed(self) -> int:
        return self.metrics.removed
