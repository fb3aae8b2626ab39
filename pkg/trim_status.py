"""
Shared per-vertex state for the trimming engines.

Every structure here is mutated only through compare-and-swap or
fetch-and-add style operations, so several workers may share one instance
during a parallel trim.
"""
import threading
import logging
import time
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

LIVE = 0
DEAD = 1

# Number of mutexes backing the per-vertex atomics.
_STRIPES = 1024


class CounterCorruptionError(RuntimeError):
    """A degree counter went below zero (the transpose disagrees with the graph)."""
    pass


class AtomicCounter:
    """Integer with atomic fetch-and-add, used for chunk cursors and tallies."""

    __slots__ = ("_value", "_lock")

    def __init__(self, initial: int = 0):
        self._value = initial
        self._lock = threading.Lock()

    @property
    def value(self) -> int:
        with self._lock:
            return self._value

    def fetch_add(self, delta: int = 1) -> int:
        """Add `delta` and return the value held before the addition."""
        with self._lock:
            old = self._value
            self._value = old + delta
            return old


class _Striped:
    """Maps vertex ids onto a fixed pool of mutexes."""

    def __init__(self):
        self._locks = [threading.Lock() for _ in range(_STRIPES)]

    def __call__(self, v: int) -> threading.Lock:
        return self._locks[v % _STRIPES]


class StatusArray:
    """Per-vertex LIVE/DEAD flags. The only transition is LIVE -> DEAD.

    With `record=True` every successful transition is appended to
    `transitions` as (vertex, thread name) so tests can check that no
    vertex was killed twice.
    """

    def __init__(self, n: int, dead: Optional[Iterable[int]] = None, record: bool = False):
        self._flags = np.zeros(n, dtype=np.uint8)
        if dead is not None:
            idx = np.fromiter(dead, dtype=np.int64)
            self._flags[idx] = DEAD
        self._stripe = _Striped()
        self._record = record
        self.transitions: List[Tuple[int, str]] = []
        self._record_lock = threading.Lock()

    @classmethod
    def from_flags(cls, flags: np.ndarray, record: bool = False) -> "StatusArray":
        status = cls(0, record=record)
        status._flags = np.asarray(flags, dtype=np.uint8).copy()
        return status

    def __len__(self) -> int:
        return int(self._flags.shape[0])

    @property
    def n(self) -> int:
        return len(self)

    def is_live(self, v: int) -> bool:
        return self._flags[v] == LIVE

    def is_dead(self, v: int) -> bool:
        return self._flags[v] == DEAD

    def try_kill(self, v: int) -> bool:
        """Set v to DEAD iff it is LIVE; True only for the caller that made the change."""
        if self._flags[v] == DEAD:
            return False
        with self._stripe(v):
            if self._flags[v] == DEAD:
                return False
            self._flags[v] = DEAD
        if self._record:
            with self._record_lock:
                self.transitions.append((v, threading.current_thread().name))
        return True

    def copy(self, record: Optional[bool] = None) -> "StatusArray":
        return StatusArray.from_flags(self._flags, record=self._record if record is None else record)

    def flags(self) -> np.ndarray:
        """Read-only view of the raw flags (0 = LIVE, 1 = DEAD)."""
        view = self._flags.view()
        view.flags.writeable = False
        return view

    def dead_set(self) -> FrozenSet[int]:
        return frozenset(np.flatnonzero(self._flags == DEAD).tolist())

    def live_vertices(self) -> np.ndarray:
        return np.flatnonzero(self._flags == LIVE)

    @property
    def dead_count(self) -> int:
        return int(np.count_nonzero(self._flags))

    @property
    def live_count(self) -> int:
        return len(self) - self.dead_count

    def assert_monotone(self):
        """Raise AssertionError if the recorder saw a vertex die twice."""
        seen: Dict[int, str] = {}
        for v, worker in self.transitions:
            if v in seen:
                raise AssertionError(f"vertex {v} killed by {seen[v]} and again by {worker}")
            seen[v] = worker

    def __eq__(self, other) -> bool:
        if not isinstance(other, StatusArray):
            return NotImplemented
        return np.array_equal(self._flags, other._flags)

    def __repr__(self) -> str:
        return f"StatusArray(n={len(self)}, dead={self.dead_count})"


class DegreeCounters:
    """Remaining out-degree per vertex, decremented with fetch-and-add."""

    def __init__(self, initial: np.ndarray):
        self._counts = np.asarray(initial, dtype=np.int64).copy()
        self._stripe = _Striped()

    def __len__(self) -> int:
        return int(self._counts.shape[0])

    def __getitem__(self, v: int) -> int:
        return int(self._counts[v])

    def dec_degree(self, v: int) -> int:
        """Decrement v's counter by one and return the new value."""
        with self._stripe(v):
            value = int(self._counts[v]) - 1
            self._counts[v] = value
        if value < 0:
            raise CounterCorruptionError(f"degree counter of vertex {v} dropped to {value}")
        return value

    def to_numpy(self) -> np.ndarray:
        return self._counts.copy()


class SupportSets:
    """Per-vertex supporting sets plus the spin lock guarding insertion.

    The lock is a one-byte flag taken with compare-and-swap and busy
    waiting. Critical sections under it are at most a status check and an
    append.
    """

    def __init__(self, n: int):
        self._sets: List[List[int]] = [[] for _ in range(n)]
        self._locked = np.zeros(n, dtype=np.uint8)
        self._stripe = _Striped()

    def __len__(self) -> int:
        return len(self._sets)

    def _cas_lock(self, v: int) -> bool:
        with self._stripe(v):
            if self._locked[v]:
                return False
            self._locked[v] = 1
            return True

    def lock(self, v: int):
        while not self._cas_lock(v):
            # spin; sleep(0) hands the interpreter to the lock holder
            time.sleep(0)

    def unlock(self, v: int):
        with self._stripe(v):
            self._locked[v] = 0

    def is_locked(self, v: int) -> bool:
        return bool(self._locked[v])

    def add(self, owner: int, member: int):
        """Append `member` to owner's set. Caller holds lock(owner)."""
        self._sets[owner].append(member)

    def take(self, owner: int) -> List[int]:
        """Detach and return owner's set. Only valid once owner is DEAD."""
        members = self._sets[owner]
        self._sets[owner] = []
        return members

    def members(self, owner: int) -> List[int]:
        return list(self._sets[owner])

    def supporter_of(self) -> Dict[int, int]:
        """Map member -> owner; raises AssertionError when a vertex sits in two sets."""
        owner_of: Dict[int, int] = {}
        for owner, members in enumerate(self._sets):
            for v in members:
                if v in owner_of:
                    raise AssertionError(f"vertex {v} supported by both {owner_of[v]} and {owner}")
                owner_of[v] = owner
        return owner_of

    def is_disjoint(self) -> bool:
        try:
            self.supporter_of()
        except AssertionError:
            return False
        return True


class EdgeCursor:
    """Per-vertex offset of the first successor not yet inspected.

    Offsets are relative to the vertex's own successor range. Only the
    worker currently scanning a vertex moves its cursor.
    """

    def __init__(self, n: int):
        self._pos = np.zeros(n, dtype=np.int64)

    def __getitem__(self, v: int) -> int:
        return int(self._pos[v])

    def advance(self, v: int, steps: int):
        if steps:
            self._pos[v] += steps

    def to_numpy(self) -> np.ndarray:
        return self._pos.copy()


def try_kill(status: StatusArray, v: int) -> bool:
    return status.try_kill(v)


def dec_degree(counters: DegreeCounters, v: int) -> int:
    return counters.dec_degree(v)


def state_memory_bits(algorithm: str, n: int, m: int, workers: int = 1, vertex_bits: int = 32) -> Dict[str, int]:
    """Bits of engine state for a graph of n vertices and m edges.

    Waiting sets hold each vertex at most once across all workers, so
    together they need n entries regardless of `workers`.
    """
    h = vertex_bits
    algorithm = algorithm.lower()
    if algorithm == "ac3":
        parts = {"status": n, "edge_index": n * h}
    elif algorithm in ("ac4", "ac4star"):
        parts = {"status": n, "deg_out": n * h, "waiting_sets": n * h, "transpose": (n + m) * h}
    elif algorithm == "ac6":
        parts = {"status": n, "lock": n, "edge_index": n * h, "support_sets": n * h, "waiting_sets": n * h}
    else:
        raise ValueError(f"Unknown algorithm: {algorithm}")
    parts["total"] = sum(parts.values())
    logger.debug(f"State budget for {algorithm} (n={n}, m={m}, P={workers}): {parts['total']} bits")
    return parts
