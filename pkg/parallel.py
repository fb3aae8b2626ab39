"""
Fork/join helpers: dynamic chunk scheduling over a vertex range and a
thread launcher that re-raises worker failures in the caller.
"""
import logging
import threading
from typing import Callable, List, Optional

from trim_status import AtomicCounter
from trim_config import ConfigurationError

logger = logging.getLogger(__name__)


class ChunkScheduler:
    """Hands out consecutive [lo, hi) vertex chunks from a shared cursor.

    Workers that finish early simply ask for the next chunk, like a
    dynamic loop schedule.
    """

    def __init__(self, n: int, chunk_size: int):
        if chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {chunk_size}")
        self.n = n
        self.chunk_size = chunk_size
        self._next = AtomicCounter()

    def next_chunk(self) -> Optional[range]:
        lo = self._next.fetch_add(self.chunk_size)
        if lo >= self.n:
            return None
        return range(lo, min(lo + self.chunk_size, self.n))

    def __iter__(self):
        while True:
            chunk = self.next_chunk()
            if chunk is None:
                return
            yield chunk


def check_workers(workers: int):
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")


def run_workers(workers: int, target: Callable[[int], None], name: str = "trim"):
    """Run target(p) for p in range(workers) on threads and join them all.

    The first exception raised by any worker is re-raised here.
    """
    check_workers(workers)
    if workers == 1:
        target(0)
        return

    errors: List[BaseException] = []
    errors_lock = threading.Lock()

    def body(p: int):
        try:
            target(p)
        except BaseException as e:
            logger.error(f"Worker {name}-{p} failed: {e}")
            with errors_lock:
                errors.append(e)

    threads = [threading.Thread(target=body, args=(p,), name=f"{name}-{p}") for p in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
