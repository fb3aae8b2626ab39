"""
Experiment harness: repeated engine runs, chunk-size sweeps, sampling
runs, aggregate statistics and CSV / JSON-lines output.
"""
import csv
import json
import math
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np

from graph_core import CsrGraph, Graph, ImplicitGraph, sample_edges, sample_vertices, transpose
from trim_ac3 import Ac3Options, trim_ac3
from trim_ac4 import Ac4Options, CounterInit, trim_ac4_par
from trim_ac6 import Ac6Options, trim_ac6_par
from trim_config import ConfigurationError
from trim_metrics import TrimMetrics, TrimResult
from trim_status import StatusArray

logger = logging.getLogger(__name__)

ALGORITHMS = ("ac3", "ac4", "ac4star", "ac6")

CSV_HEADER = ["algorithm", "P", "rep", "max_edges_per_worker", "total_edges", "max_qp", "removed", "wall_ms"]

# two-sided z value for a 95% interval under the normal approximation
Z_95 = 1.96


@dataclass
class SamplingSpec:
    kind: str  # "edges" or "vertices"
    ratios: List[float]

    def validate(self) -> "SamplingSpec":
        if self.kind not in ("edges", "vertices"):
            raise ConfigurationError(f"sampling kind must be 'edges' or 'vertices', got {self.kind!r}")
        if not self.ratios:
            raise ConfigurationError("sampling needs at least one ratio")
        return self


@dataclass
class BenchConfig:
    algorithm: str = "ac6"
    workers: List[int] = field(default_factory=lambda: [1])
    chunk_size: int = 4096
    repetitions: int = 50
    seed: int = 42
    sampling: Optional[SamplingSpec] = None
    max_repetitions: Optional[int] = None
    check_in_degree: bool = False

    def validate(self) -> "BenchConfig":
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
        if self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
        if not self.workers or min(self.workers) < 1:
            raise ConfigurationError(f"worker counts must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.sampling is not None:
            self.sampling.validate()
        return self


@dataclass
class BenchRow:
    algorithm: str
    P: int
    rep: Union[int, str]
    max_edges_per_worker: float
    total_edges: float
    max_qp: float
    removed: float
    wall_ms: float
    ratio: Optional[float] = None
    chunk_size: Optional[int] = None

    @classmethod
    def from_metrics(cls, algorithm: str, workers: int, rep: int, metrics: TrimMetrics, **extra) -> "BenchRow":
        return cls(algorithm, workers, rep, metrics.max_edges_per_worker, metrics.total_edges,
                   metrics.max_qp, metrics.removed, metrics.wall_ms, **extra)

    def to_dict(self) -> Dict[str, Any]:
        row = {k: getattr(self, k) for k in CSV_HEADER}
        if self.ratio is not None:
            row["ratio"] = self.ratio
        if self.chunk_size is not None:
            row["chunk_size"] = self.chunk_size
        return row


def run_trim(g: Graph, algorithm: str, workers: int = 1, chunk_size: int = 4096,
             init: Optional[StatusArray] = None, gt: Optional[CsrGraph] = None,
             max_repetitions: Optional[int] = None, check_in_degree: bool = False) -> TrimResult:
    """Run one parallel engine by name on fresh state."""
    if algorithm == "ac3":
        if check_in_degree and gt is None and isinstance(g, CsrGraph):
            gt = transpose(g)
        opts = Ac3Options(workers, chunk_size, max_repetitions, check_in_degree)
        return trim_ac3(g, init, opts, transpose=gt if check_in_degree else None)
    if algorithm in ("ac4", "ac4star"):
        if isinstance(g, ImplicitGraph):
            raise ConfigurationError("AC-4 trimming cannot run on an implicit graph")
        if gt is None:
            gt = transpose(g)
        mode = CounterInit.OFFSET_DIFF if algorithm == "ac4star" else CounterInit.TRAVERSE
        return trim_ac4_par(g, gt, Ac4Options(workers, chunk_size, mode), init=init)
    if algorithm == "ac6":
        return trim_ac6_par(g, Ac6Options(workers, chunk_size), init=init)
    raise ConfigurationError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")


def _run_series(g: Graph, cfg: BenchConfig, init: Optional[StatusArray], gt: Optional[CsrGraph],
                **extra) -> List[BenchRow]:
    rows: List[BenchRow] = []
    for workers in cfg.workers:
        series: List[BenchRow] = []
        for rep in range(cfg.repetitions):
            result = run_trim(g, cfg.algorithm, workers, cfg.chunk_size, init=init, gt=gt,
                              max_repetitions=cfg.max_repetitions, check_in_degree=cfg.check_in_degree)
            series.append(BenchRow.from_metrics(cfg.algorithm, workers, rep, result.metrics, **extra))
        removed = {r.removed for r in series}
        if len(removed) > 1:
            logger.warning(f"{cfg.algorithm} P={workers}: removed counts differ across repetitions: {sorted(removed)}")
        rows.extend(series)
        rows.extend(aggregate(series))
    return rows


def run_bench(g: Graph, cfg: BenchConfig, gt: Optional[CsrGraph] = None) -> List[BenchRow]:
    """Every (P, repetition) run as a row, followed by mean and ci95 rows per P."""
    cfg.validate()
    if cfg.algorithm in ("ac4", "ac4star") and gt is None and isinstance(g, CsrGraph):
        gt = transpose(g)
    logger.info(f"Bench {cfg.algorithm}: P={cfg.workers}, reps={cfg.repetitions}, chunk={cfg.chunk_size}, "
                f"seed={cfg.seed}, sampling={cfg.sampling}")
    if cfg.sampling is None:
        return _run_series(g, cfg, None, gt)

    rows: List[BenchRow] = []
    for ratio in cfg.sampling.ratios:
        if cfg.sampling.kind == "edges":
            if not isinstance(g, CsrGraph):
                raise ConfigurationError("edge sampling needs an explicit graph")
            sampled = sample_edges(g, ratio, cfg.seed)
            sampled_gt = transpose(sampled) if cfg.algorithm in ("ac4", "ac4star") else None
            rows.extend(_run_series(sampled, cfg, None, sampled_gt, ratio=ratio))
        else:
            init = sample_vertices(g, ratio, cfg.seed)
            rows.extend(_run_series(g, cfg, init, gt, ratio=ratio))
    return rows


def chunk_sweep(g: Graph, algorithm: str, workers: int, chunk_sizes: Sequence[int],
                repetitions: int = 1, gt: Optional[CsrGraph] = None) -> List[BenchRow]:
    """One row per chunk size (the mean over `repetitions` runs)."""
    if not chunk_sizes:
        raise ConfigurationError("chunk_sizes must not be empty")
    if algorithm in ("ac4", "ac4star") and gt is None and isinstance(g, CsrGraph):
        gt = transpose(g)
    rows: List[BenchRow] = []
    for size in chunk_sizes:
        cfg = BenchConfig(algorithm=algorithm, workers=[workers], chunk_size=size, repetitions=repetitions)
        cfg.validate()
        series = _run_series(g, cfg, None, gt, chunk_size=size)
        mean = next(r for r in series if r.rep == "mean")
        rows.append(mean)
        logger.info(f"Chunk {size}: mean wall {mean.wall_ms:.2f} ms, max edges/worker {mean.max_edges_per_worker:.0f}")
    return rows


def aggregate(rows: Sequence[BenchRow]) -> List[BenchRow]:
    """Mean row and 95% CI half-width row (mean +- 1.96 s / sqrt(reps))."""
    if not rows:
        return []
    first = rows[0]
    columns = ["max_edges_per_worker", "total_edges", "max_qp", "removed", "wall_ms"]
    values = {c: np.array([getattr(r, c) for r in rows], dtype=float) for c in columns}
    k = len(rows)
    means = {c: float(v.mean()) for c, v in values.items()}
    halves = {c: (Z_95 * float(v.std(ddof=1)) / math.sqrt(k)) if k > 1 else 0.0 for c, v in values.items()}
    extra = {"ratio": first.ratio, "chunk_size": first.chunk_size}
    return [
        BenchRow(first.algorithm, first.P, "mean", **means, **extra),
        BenchRow(first.algorithm, first.P, "ci95", **halves, **extra),
    ]


def write_csv(rows: Iterable[BenchRow], out: TextIO):
    rows = list(rows)
    header = list(CSV_HEADER)
    if any(r.ratio is not None for r in rows):
        header.append("ratio")
    if any(r.chunk_size is not None for r in rows):
        header.append("chunk_size")
    writer = csv.DictWriter(out, fieldnames=header, extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.to_dict())


def write_jsonl(rows: Iterable[BenchRow], out: TextIO):
    for r in rows:
        out.write(json.dumps(r.to_dict()) + "\n")


def write_rows(rows: Iterable[BenchRow], out: TextIO, fmt: str = "csv"):
    if fmt == "csv":
        write_csv(rows, out)
    elif fmt == "json":
        write_jsonl(rows, out)
    else:
        raise ConfigurationError(f"unknown output format {fmt!r}")
