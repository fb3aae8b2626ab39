import threading

import pytest

from parallel import ChunkScheduler, run_workers
from trim_config import ConfigurationError


@pytest.mark.parametrize("n,chunk", [(0, 4), (1, 4), (10, 3), (100, 7), (64, 64)])
def test_chunks_cover_range_once(n, chunk):
    scheduler = ChunkScheduler(n, chunk)
    seen = []
    seen_lock = threading.Lock()

    def work(p):
        for c in scheduler:
            assert len(c) <= chunk
            with seen_lock:
                seen.extend(c)

    run_workers(4, work)
    assert sorted(seen) == list(range(n))


def test_scheduler_rejects_zero_chunk():
    with pytest.raises(ConfigurationError):
        ChunkScheduler(10, 0)


def test_single_worker_runs_inline():
    names = []
    run_workers(1, lambda p: names.append((p, threading.current_thread().name)))
    assert names == [(0, threading.current_thread().name)]


def test_worker_failure_reraised():
    def work(p):
        if p == 2:
            raise KeyError("boom")

    with pytest.raises(KeyError):
        run_workers(4, work, name="fail")


def test_workers_must_be_positive():
    with pytest.raises(ConfigurationError):
        run_workers(0, lambda p: None)
