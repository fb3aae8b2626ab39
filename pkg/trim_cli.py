"""
Command-line entry point for the graph trimming toolkit.

    python trim_cli.py trim --algo ac6 --workers 16 graph.csr
    python trim_cli.py stats graph.edges
    python trim_cli.py bench --algo ac3 --workers 1,2,4,8 --reps 10 --gen er --n 100000 --m 800000
"""
import sys
import logging
import argparse
from typing import List, Optional, Tuple

import psutil
from dotenv import load_dotenv

from bench import ALGORITHMS, BenchConfig, BenchRow, SamplingSpec, chunk_sweep, run_bench, run_trim, write_rows
from generators import gen_ba, gen_er, gen_rmat
from graph_core import (CsrGraph, GraphError, graph_stats, read_graph, sample_edges, sample_vertices,
                        transpose, write_graph)
from trim_ac4 import CounterInit, trim_ac4_seq
from trim_ac6 import trim_ac6_seq
from trim_config import ConfigurationError, TrimConfig, load_config, setup_logging
from trim_metrics import TrimResult
from trim_status import StatusArray, state_memory_bits
from verify_oracle import check_complete, check_sound, fixed_point_trim

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class VerificationError(Exception):
    pass


def _ratio_list(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("graph", nargs="?", help="graph file (edge list or CSR binary)")
    source.add_argument("--input-format", choices=["edgelist", "csr"], help="default: sniff the file")
    source.add_argument("--gen", choices=["er", "ba", "rmat"], help="generate the graph instead of reading one")
    source.add_argument("--n", type=int, help="generator vertex count")
    source.add_argument("--m", type=int, help="generator edge count")
    source.add_argument("--rmat-abc", default="0.57,0.19,0.19", help="R-MAT quadrant probabilities a,b,c")
    source.add_argument("--seed", type=int, help="seed for generators and sampling")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="trim_config.json")
    common.add_argument("-v", "--verbose", action="store_true")

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--chunk-size", type=int)
    engine.add_argument("--max-reps", type=int, help="AC-3 sweep cap")
    engine.add_argument("--check-indegree", action="store_true", help="AC-3: also remove vertices without LIVE predecessors")
    engine.add_argument("--counter-init", choices=[c.value for c in CounterInit], help="AC-4 counter initialisation")
    engine.add_argument("--out", help="write result rows to this file")
    engine.add_argument("--format", choices=["csv", "json"])

    parser = argparse.ArgumentParser(prog="trim", description="Parallel graph trimming toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trim", parents=[common, source, engine], help="run trimming engines")
    p.add_argument("--algo", action="append", choices=ALGORITHMS, help="repeatable; default ac6")
    p.add_argument("--workers", type=int)
    p.add_argument("--sequential", action="store_true", help="use the sequential AC-4 / AC-6 engines")
    p.add_argument("--sample-edges", type=float, metavar="R")
    p.add_argument("--sample-vertices", type=float, metavar="R")
    p.add_argument("--verify", action="store_true", help="cross-check against the brute-force oracle")

    p = sub.add_parser("bench", parents=[common, source, engine], help="repeated measured runs")
    p.add_argument("--algo", choices=ALGORITHMS, default="ac6")
    p.add_argument("--workers", type=_int_list, help="comma-separated worker counts")
    p.add_argument("--reps", type=int)
    p.add_argument("--chunk-sizes", type=_int_list, help="comma-separated; runs a chunk-size sweep")
    p.add_argument("--sample-edges", type=_ratio_list, metavar="R[,R...]")
    p.add_argument("--sample-vertices", type=_ratio_list, metavar="R[,R...]")

    p = sub.add_parser("verify", parents=[common, source], help="check every engine against the oracle")
    p.add_argument("--workers", type=_int_list, help="comma-separated worker counts (default 1,2,4,8)")
    p.add_argument("--chunk-size", type=int)

    p = sub.add_parser("gen", parents=[common, source], help="write a synthetic graph")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csr", "edgelist"], default="csr")

    sub.add_parser("stats", parents=[common, source], help="print graph statistics")

    p = sub.add_parser("convert", parents=[common, source], help="convert between edge list and CSR binary")
    p.add_argument("--out", required=True)
    p.add_argument("--to", choices=["csr", "edgelist"], required=True)
    return parser


def load_source(args, config: TrimConfig) -> CsrGraph:
    if (args.graph is None) == (args.gen is None):
        raise ConfigurationError("give exactly one graph source: a file path or --gen")
    if args.graph is not None:
        return read_graph(args.graph, args.input_format)
    if args.n is None or args.m is None:
        raise ConfigurationError("--gen needs --n and --m")
    seed = args.seed if args.seed is not None else config.seed
    if args.gen == "er":
        return gen_er(args.n, args.m, seed)
    if args.gen == "ba":
        return gen_ba(args.n, args.m, seed)
    a, b, c = (float(x) for x in args.rmat_abc.split(","))
    return gen_rmat(args.n, args.m, seed, a, b, c)


def _resolve_algo(algo: str, counter_init: Optional[str]) -> str:
    if algo in ("ac4", "ac4star") and counter_init is not None:
        return "ac4star" if counter_init == CounterInit.OFFSET_DIFF.value else "ac4"
    return algo


def _describe(name: str, workers: int, result: TrimResult, n: int) -> str:
    m = result.metrics
    share = 100.0 * m.removed / n if n else 0.0
    progress = "sweeps" if name == "ac3" else "drained"
    return (f"{name} P={workers}: removed {m.removed}/{n} ({share:.2f}%), edges total={m.total_edges} "
            f"max/worker={m.max_edges_per_worker}, max|Q_p|={m.max_qp}, {progress}={m.sweeps_or_rounds}, "
            f"{m.wall_ms:.1f} ms")


def _verify(g: CsrGraph, result: TrimResult, init: Optional[StatusArray], gt: Optional[CsrGraph], name: str):
    oracle = fixed_point_trim(g, init, gt=gt)
    if result.dead_set() != oracle.dead_set:
        raise VerificationError(f"{name}: DEAD set differs from oracle "
                                f"({len(result.dead_set())} vs {len(oracle.dead_set)})")
    if gt is None and not (check_sound(g, result.status) and check_complete(g, result.status)):
        raise VerificationError(f"{name}: result is not sound and complete")
    print(f"✅ {name} matches oracle ({len(oracle.dead_set)} dead, {oracle.peeling_rounds} peeling rounds)")


def cmd_trim(args, config: TrimConfig) -> int:
    g = load_source(args, config)
    seed = args.seed if args.seed is not None else config.seed
    workers = args.workers if args.workers is not None else config.resolved_workers()
    chunk = args.chunk_size if args.chunk_size is not None else config.chunk_size
    print(f"seed={seed}")
    if args.sample_edges is not None:
        g = sample_edges(g, args.sample_edges, seed)
    init = sample_vertices(g, args.sample_vertices, seed) if args.sample_vertices is not None else None
    if args.verify and g.n > config.verify_max_vertices:
        raise ConfigurationError(f"--verify limited to {config.verify_max_vertices} vertices, graph has {g.n}")

    gt = transpose(g) if args.check_indegree else None
    rows: List[BenchRow] = []
    removed_counts = {}
    for algo in args.algo or ["ac6"]:
        name = _resolve_algo(algo, args.counter_init)
        if args.sequential and name in ("ac4", "ac4star"):
            mode = CounterInit.OFFSET_DIFF if name == "ac4star" else CounterInit.TRAVERSE
            result = trim_ac4_seq(g, transpose(g), init=init, counter_init=mode)
            used = 1
        elif args.sequential and name == "ac6":
            result = trim_ac6_seq(g, init=init)
            used = 1
        else:
            result = run_trim(g, name, workers, chunk, init=init, gt=gt,
                              max_repetitions=args.max_reps, check_in_degree=args.check_indegree)
            used = workers
        print(_describe(name, used, result, g.n))
        rows.append(BenchRow.from_metrics(name, used, 0, result.metrics))
        removed_counts[name] = result.metrics.removed
        if not args.verify:
            continue
        if name == "ac3" and args.max_reps is not None:
            extra = result.dead_set() - fixed_point_trim(g, init, gt=gt).dead_set
            if extra:
                raise VerificationError(f"capped ac3 removed {len(extra)} vertices the oracle keeps")
            print(f"✅ {name} (capped) removed a subset of the oracle DEAD set")
        else:
            _verify(g, result, init, gt if name == "ac3" else None, name)

    comparable = args.max_reps is None and not args.check_indegree
    if args.verify and comparable and len(set(removed_counts.values())) > 1:
        raise VerificationError(f"engines disagree on removed counts: {removed_counts}")
    _emit(rows, args, config)
    return EXIT_OK


def cmd_bench(args, config: TrimConfig) -> int:
    g = load_source(args, config)
    seed = args.seed if args.seed is not None else config.seed
    workers = args.workers or [config.resolved_workers()]
    algo = _resolve_algo(args.algo, args.counter_init)
    print(f"seed={seed}")
    if args.chunk_sizes:
        rows = []
        for p in workers:
            rows.extend(chunk_sweep(g, algo, p, args.chunk_sizes, repetitions=args.reps or 1))
    else:
        sampling = None
        if args.sample_edges and args.sample_vertices:
            raise ConfigurationError("choose either --sample-edges or --sample-vertices")
        if args.sample_edges:
            sampling = SamplingSpec("edges", args.sample_edges)
        elif args.sample_vertices:
            sampling = SamplingSpec("vertices", args.sample_vertices)
        chunk = args.chunk_size if args.chunk_size is not None else config.chunk_size
        cfg = BenchConfig(algorithm=algo, workers=workers, chunk_size=chunk,
                          repetitions=args.reps or config.repetitions, seed=seed, sampling=sampling,
                          max_repetitions=args.max_reps, check_in_degree=args.check_indegree)
        rows = run_bench(g, cfg)
    _emit(rows, args, config, echo=True)
    return EXIT_OK


def cmd_verify(args, config: TrimConfig) -> int:
    g = load_source(args, config)
    if g.n > config.verify_max_vertices:
        raise ConfigurationError(f"verify limited to {config.verify_max_vertices} vertices, graph has {g.n}")
    gt = transpose(g)
    chunk = args.chunk_size if args.chunk_size is not None else config.chunk_size
    runs: List[Tuple[str, TrimResult]] = [
        ("ac4-seq", trim_ac4_seq(g, gt)),
        ("ac6-seq", trim_ac6_seq(g)),
    ]
    for p in args.workers or [1, 2, 4, 8]:
        for algo in ALGORITHMS:
            runs.append((f"{algo} P={p}", run_trim(g, algo, p, chunk, gt=gt)))
    failures = 0
    for name, result in runs:
        try:
            _verify(g, result, None, None, name)
        except VerificationError as e:
            failures += 1
            print(f"❌ {e}")
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


def cmd_gen(args, config: TrimConfig) -> int:
    if args.gen is None:
        raise ConfigurationError("gen needs --gen MODEL --n N --m M")
    g = load_source(args, config)
    write_graph(g, args.out, args.format)
    print(f"wrote {args.out}: n={g.n}, m={g.m}")
    return EXIT_OK


def cmd_stats(args, config: TrimConfig) -> int:
    g = load_source(args, config)
    stats = graph_stats(g)
    print(f"n={stats.n} m={stats.m} Deg_in={stats.max_in_degree} Deg_out={stats.max_out_degree} "
          f"alpha={stats.alpha} %Trim={100.0 * stats.trim_percent:.2f}%")
    available = psutil.virtual_memory().available
    workers = config.resolved_workers()
    for algo in ("ac3", "ac4", "ac6"):
        bits = state_memory_bits(algo, g.n, g.m, workers)["total"]
        print(f"  {algo} state: {bits / 8 / 2**20:.1f} MiB (available {available / 2**20:.0f} MiB)")
    return EXIT_OK


def cmd_convert(args, config: TrimConfig) -> int:
    g = load_source(args, config)
    write_graph(g, args.out, args.to)
    print(f"converted to {args.to}: {args.out}")
    return EXIT_OK


def _emit(rows: List[BenchRow], args, config: TrimConfig, echo: bool = False):
    fmt = args.format or config.output_format
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                write_rows(rows, f, fmt)
        except OSError as e:
            raise GraphError(f"cannot write {args.out}: {e}") from e
        logger.info(f"Wrote {len(rows)} rows to {args.out}")
    elif echo:
        write_rows(rows, sys.stdout, fmt)


COMMANDS = {
    "trim": cmd_trim,
    "bench": cmd_bench,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "stats": cmd_stats,
    "convert": cmd_convert,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = load_config(args.config)
        setup_logging("DEBUG" if args.verbose else config.log_level)
        return COMMANDS[args.command](args, config)
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, OSError) as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
