"""
Graph representation for the trimming engines.

Explicit graphs are stored in compressed sparse row form (CsrGraph);
implicit graphs only expose a successor function (ImplicitGraph). Also
holds the edge-list and CSR binary codecs, transpose, peeling-step
computation and the two sampling transforms.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import islice
from typing import BinaryIO, Callable, Iterator, List, Optional, Sequence, TextIO, Union

import numpy as np

from trim_status import AtomicCounter, StatusArray

logger = logging.getLogger(__name__)

CSR_MAGIC = b"CSRG"
CSR_VERSION = 1
MAX_VERTICES = 2 ** 32


class GraphError(Exception):
    """Base class for graph loading and validation errors."""
    pass


class EdgeListParseError(GraphError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CapacityError(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


class GraphIOError(GraphError):
    pass


class GraphValidationError(GraphError):
    pass


class SamplingError(ValueError):
    pass


class CsrGraph:
    """Immutable directed graph in compressed sparse row form.

    Successors of v are targets[offsets[v]:offsets[v+1]], in storage order.
    """

    def __init__(self, offsets, targets, validate: bool = True):
        offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        targets = np.ascontiguousarray(targets, dtype=np.int64)
        if validate:
            _validate_csr(offsets, targets)
        offsets.flags.writeable = False
        targets.flags.writeable = False
        self.offsets = offsets
        self.targets = targets

    @classmethod
    def from_edges(cls, n: int, src, dst) -> "CsrGraph":
        """Build from parallel source/target arrays; per-source order follows input order."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape:
            raise GraphValidationError("source and target arrays differ in length")
        if n >= MAX_VERTICES:
            raise CapacityError(f"{n} vertices exceed the 32-bit id width")
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise GraphValidationError(f"edge endpoint outside [0, {n})")
        order = np.argsort(src, kind="stable")
        counts = np.bincount(src, minlength=n)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return cls(offsets, dst[order], validate=False)

    @classmethod
    def empty(cls, n: int = 0) -> "CsrGraph":
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.offsets.shape[0]) - 1

    @property
    def m(self) -> int:
        return int(self.targets.shape[0])

    @cached_property
    def _offsets_list(self) -> List[int]:
        return self.offsets.tolist()

    @cached_property
    def _targets_list(self) -> List[int]:
        return self.targets.tolist()

    def out_degree(self, v: int) -> int:
        off = self._offsets_list
        return off[v + 1] - off[v]

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def successors(self, v: int, start: int = 0) -> List[int]:
        """Successors of v from position `start` of its range onwards."""
        off = self._offsets_list
        return self._targets_list[off[v] + start:off[v + 1]]

    def edges(self) -> Iterator[tuple]:
        off = self._offsets_list
        tgt = self._targets_list
        for v in range(self.n):
            for i in range(off[v], off[v + 1]):
                yield v, tgt[i]

    def sources(self) -> np.ndarray:
        """Source vertex of every edge slot, aligned with `targets`."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.out_degrees())

    def edge_multiset(self) -> np.ndarray:
        """Edges as sorted (src, dst) rows, for order-insensitive comparison."""
        pairs = np.stack([self.sources(), self.targets], axis=1)
        if pairs.size == 0:
            return pairs
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CsrGraph):
            return NotImplemented
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(self.targets, other.targets)

    def __repr__(self) -> str:
        return f"CsrGraph(n={self.n}, m={self.m})"


def _validate_csr(offsets: np.ndarray, targets: np.ndarray):
    if offsets.ndim != 1 or offsets.shape[0] < 1:
        raise GraphValidationError("offsets must hold n+1 entries")
    n = offsets.shape[0] - 1
    m = targets.shape[0]
    if n >= MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceed the 32-bit id width")
    if offsets[0] != 0:
        raise GraphValidationError(f"offsets[0] is {offsets[0]}, expected 0")
    if offsets[-1] != m:
        raise GraphValidationError(f"offsets[n] is {offsets[-1]}, expected m={m}")
    if n and np.any(np.diff(offsets) < 0):
        raise GraphValidationError("offsets are not nondecreasing")
    if m and (targets.min() < 0 or targets.max() >= n):
        raise GraphValidationError(f"target outside [0, {n})")


class ImplicitGraph:
    """Graph known only through a successor function.

    Engines built on this interface never ask for predecessors.
    `traversal_counter` grows by one for every successor handed out.
    """

    def __init__(self, n: int, post_fn: Callable[[int], Sequence[int]]):
        self._n = n
        self.post_fn = post_fn
        self.traversal_counter = AtomicCounter()

    @classmethod
    def from_csr(cls, g: CsrGraph) -> "ImplicitGraph":
        return cls(g.n, lambda v: g.successors(v))

    @property
    def n(self) -> int:
        return self._n

    @property
    def traversed(self) -> int:
        return self.traversal_counter.value

    def successors(self, v: int, start: int = 0) -> Iterator[int]:
        for w in islice(self.post_fn(v), start, None):
            self.traversal_counter.fetch_add(1)
            yield w

    def __repr__(self) -> str:
        return f"ImplicitGraph(n={self._n})"


Graph = Union[CsrGraph, ImplicitGraph]


@dataclass
class GraphStats:
    """The per-graph columns of the benchmark overview table."""
    n: int
    m: int
    max_in_degree: int
    max_out_degree: int
    alpha: int
    trim_percent: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "max_in_degree": self.max_in_degree,
            "max_out_degree": self.max_out_degree,
            "alpha": self.alpha,
            "trim_percent": self.trim_percent,
        }


@dataclass
class PeelResult:
    alpha: int
    removed: int
    status: StatusArray


def load_edge_list(stream: Union[TextIO, BinaryIO], renumber: bool = False) -> CsrGraph:
    """Parse "src dst" lines into a CsrGraph.

    Accepts text or binary streams; binary lines are decoded as UTF-8.

    Lines starting with '#' are comments, except a "# n=<N>" header which
    fixes the vertex count. With `renumber`, ids are compacted in order of
    first appearance.
    """
    src: List[int] = []
    dst: List[int] = []
    declared_n: Optional[int] = None
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise EdgeListParseError(line_no, f"invalid UTF-8 at byte {e.start}")
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = line[1:].strip().replace(" ", "")
            if header.startswith("n="):
                try:
                    declared_n = int(header[2:])
                except ValueError:
                    raise EdgeListParseError(line_no, f"bad vertex-count header {line!r}")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, f"expected two vertex ids, got {line!r}")
        try:
            s, d = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(line_no, f"non-integer vertex id in {line!r}")
        if s < 0 or d < 0:
            raise EdgeListParseError(line_no, f"negative vertex id in {line!r}")
        if s >= MAX_VERTICES or d >= MAX_VERTICES:
            raise CapacityError(f"line {line_no}: vertex id exceeds the 32-bit id width")
        src.append(s)
        dst.append(d)

    if renumber:
        mapping = {}
        for s, d in zip(src, dst):
            mapping.setdefault(s, len(mapping))
            mapping.setdefault(d, len(mapping))
        src = [mapping[s] for s in src]
        dst = [mapping[d] for d in dst]
        n = len(mapping)
        if declared_n is not None:
            n = max(n, declared_n)
    else:
        n = 1 + max(max(src), max(dst)) if src else 0
        if declared_n is not None:
            if declared_n < n:
                raise GraphValidationError(f"header declares n={declared_n} but ids reach {n - 1}")
            n = declared_n
    if n >= MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceed the 32-bit id width")
    g = CsrGraph.from_edges(n, src, dst)
    logger.debug(f"Parsed edge list: n={g.n}, m={g.m}")
    return g


def write_edge_list(g: CsrGraph, stream: TextIO):
    stream.write(f"# n={g.n}\n")
    for v, w in g.edges():
        stream.write(f"{v} {w}\n")


def write_csr(g: CsrGraph, sink: BinaryIO):
    """Little-endian layout: magic, u32 version, u64 n, u64 m, u64 offsets, u32 targets."""
    if g.n >= MAX_VERTICES:
        raise CapacityError(f"{g.n} vertices exceed the 32-bit id width")
    sink.write(CSR_MAGIC)
    sink.write(np.array([CSR_VERSION], dtype="<u4").tobytes())
    sink.write(np.array([g.n, g.m], dtype="<u8").tobytes())
    sink.write(g.offsets.astype("<u8").tobytes())
    sink.write(g.targets.astype("<u4").tobytes())


def _read_exact(source: BinaryIO, size: int, what: str) -> bytes:
    data = source.read(size)
    if len(data) != size:
        raise GraphIOError(f"truncated CSR stream while reading {what}: wanted {size} bytes, got {len(data)}")
    return data


def read_csr(source: BinaryIO) -> CsrGraph:
    magic = _read_exact(source, 4, "magic")
    if magic != CSR_MAGIC:
        raise GraphFormatError(f"bad magic {magic!r}, expected {CSR_MAGIC!r}")
    version = int(np.frombuffer(_read_exact(source, 4, "version"), dtype="<u4")[0])
    if version != CSR_VERSION:
        raise GraphFormatError(f"unsupported CSR version {version}")
    n, m = (int(x) for x in np.frombuffer(_read_exact(source, 16, "header"), dtype="<u8"))
    if n >= MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceed the 32-bit id width")
    offsets = np.frombuffer(_read_exact(source, 8 * (n + 1), "offsets"), dtype="<u8").astype(np.int64)
    targets = np.frombuffer(_read_exact(source, 4 * m, "targets"), dtype="<u4").astype(np.int64)
    return CsrGraph(offsets, targets)


def read_graph(path: str, fmt: Optional[str] = None) -> CsrGraph:
    """Load a graph file; `fmt` is "csr", "edgelist" or None to sniff the magic."""
    try:
        with open(path, "rb") as f:
            if fmt is None:
                fmt = "csr" if f.read(4) == CSR_MAGIC else "edgelist"
                f.seek(0)
            if fmt == "csr":
                g = read_csr(f)
            elif fmt == "edgelist":
                g = load_edge_list(f)
            else:
                raise GraphFormatError(f"unknown graph format {fmt!r}")
    except OSError as e:
        raise GraphIOError(f"cannot read {path}: {e}") from e
    logger.info(f"Loaded {path} ({fmt}): n={g.n}, m={g.m}")
    return g


def write_graph(g: CsrGraph, path: str, fmt: str = "csr"):
    try:
        if fmt == "csr":
            with open(path, "wb") as f:
                write_csr(g, f)
        elif fmt == "edgelist":
            with open(path, "w", encoding="utf-8") as f:
                write_edge_list(g, f)
        else:
            raise GraphFormatError(f"unknown graph format {fmt!r}")
    except OSError as e:
        raise GraphIOError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {path} ({fmt}): n={g.n}, m={g.m}")


def transpose(g: CsrGraph) -> CsrGraph:
    """Reverse every edge. Predecessors of v come out in increasing source order."""
    return CsrGraph.from_edges(g.n, g.targets, g.sources())


def peel(g: CsrGraph, init: Optional[StatusArray] = None, gt: Optional[CsrGraph] = None) -> PeelResult:
    """Synchronous peeling: each round removes every LIVE vertex with no LIVE successor."""
    n = g.n
    status = init.copy() if init is not None else StatusArray(n)
    if gt is None:
        gt = transpose(g)
    dead = status.flags().astype(bool)
    live_succ = np.bincount(g.sources()[~dead[g.targets]], minlength=n) if g.m else np.zeros(n, dtype=np.int64)
    frontier = np.flatnonzero((live_succ == 0) & ~dead)
    alpha = 0
    removed = 0
    while frontier.size:
        alpha += 1
        removed += int(frontier.size)
        dead[frontier] = True
        # predecessors of the frontier, one entry per reverse edge slot
        starts = gt.offsets[frontier]
        lengths = gt.offsets[frontier + 1] - starts
        if lengths.sum():
            slot = np.repeat(starts - np.cumsum(lengths) + lengths, lengths) + np.arange(lengths.sum())
            preds = gt.targets[slot]
            np.subtract.at(live_succ, preds, 1)
            touched = np.unique(preds)
            frontier = touched[(live_succ[touched] == 0) & ~dead[touched]]
        else:
            frontier = frontier[:0]
    for v in np.flatnonzero(dead & ~status.flags().astype(bool)).tolist():
        status.try_kill(v)
    return PeelResult(alpha=alpha, removed=removed, status=status)


def peeling_steps(g: CsrGraph) -> int:
    return peel(g).alpha


def graph_stats(g: CsrGraph, gt: Optional[CsrGraph] = None) -> GraphStats:
    if gt is None:
        gt = transpose(g)
    result = peel(g, gt=gt)
    return GraphStats(
        n=g.n,
        m=g.m,
        max_in_degree=int(gt.out_degrees().max()) if g.n else 0,
        max_out_degree=int(g.out_degrees().max()) if g.n else 0,
        alpha=result.alpha,
        trim_percent=result.removed / g.n if g.n else 0.0,
    )


def _check_ratio(ratio: float):
    if not (0.0 < ratio <= 1.0):
        raise SamplingError(f"sampling ratio must lie in (0, 1], got {ratio}")


def sample_edges(g: CsrGraph, ratio: float, seed: int) -> CsrGraph:
    """Keep each edge independently with probability `ratio`."""
    _check_ratio(ratio)
    rng = np.random.default_rng(seed)
    keep = rng.random(g.m) < ratio
    sampled = CsrGraph.from_edges(g.n, g.sources()[keep], g.targets[keep])
    logger.debug(f"Edge sampling at {ratio}: kept {sampled.m} of {g.m} edges")
    return sampled


def sample_vertices(g: Graph, ratio: float, seed: int) -> StatusArray:
    """Initial status with each vertex DEAD with probability 1 - ratio."""
    _check_ratio(ratio)
    rng = np.random.default_rng(seed)
    dropped = np.flatnonzero(rng.random(g.n) >= ratio)
    logger.debug(f"Vertex sampling at {ratio}: {dropped.size} of {g.n} vertices start DEAD")
    return StatusArray(g.n, dead=dropped.tolist())
