"""Command-line front end.

    twops partition --algorithm 2ps-l -k 32 --alpha 1.05 in.bin out.bin
    twops convert edges.txt edges.bin [--remap]
    twops generate planted out.bin --clusters 64 --size 40 --p-intra 0.3 --p-inter 0.001
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import dbh_partition, hdrf_partition, run_2ps_hdrf
from .config import ALGORITHMS, ConfigError, RunConfig
from .edge_stream import (
    DEFAULT_CHUNK_EDGES, EdgeFormatError, EdgeStreamError, convert_text, open_stream,
    write_assignment,
)
from .metrics import PartitionReport, Verification, verify_assignment
from .partitioning import PartitionRun, run_2psl
from .synthgen import PlantedConfig, generate_planted, generate_uniform

RUNNERS = {
    "2ps-l": run_2psl,
    "2ps-hdrf": run_2ps_hdrf,
    "hdrf": hdrf_partition,
    "dbh": dbh_partition,
}


def partition_stream(stream, config: RunConfig, parts=None) -> PartitionRun:
    return RUNNERS[config.algorithm](stream, config, parts=parts)


@dataclass
class RunResult:
    status: int
    report: PartitionReport
    verification: Verification | None


def run(config: RunConfig, input_path, output_path, verify: bool = True,
        dump_clusters=None, chunk_edges: int = DEFAULT_CHUNK_EDGES) -> RunResult:
    """Partition ``input_path``, write triples to ``output_path`` and self-check them.

    The per-edge partition buffer is a temporary memory-mapped file, so memory
    use stays proportional to the vertex count.
    """
    stream = open_stream(input_path, chunk_edges=chunk_edges)
    output_path = Path(output_path)
    fd, tmp = tempfile.mkstemp(prefix=output_path.name + ".", suffix=".parts",
                               dir=output_path.parent)
    os.close(fd)
    try:
        if stream.edge_count:
            parts = np.memmap(tmp, dtype=np.uint32, mode="w+", shape=(stream.edge_count,))
        else:
            parts = np.zeros(0, dtype=np.uint32)
        result = partition_stream(stream, config, parts)
        write_assignment(result.assignment, output_path)
    finally:
        os.unlink(tmp)

    if dump_clusters is not None and result.cluster_state is not None:
        result.cluster_state.dump(dump_clusters)

    verification = None
    status = 0
    if verify:
        verification = verify_assignment(output_path, stream, config.k,
                                         result.assignment.capacity,
                                         expected_rf=result.report.replication_factor)
        status = 0 if verification.ok else 1
    return RunResult(status, result.report, verification)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twops", description="Out-of-core edge partitioning.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a binary edge list")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("-k", type=int, required=True, help="number of partitions (>= 2)")
    p.add_argument("--alpha", type=float, default=1.05, help="balance factor (>= 1)")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="2ps-l")
    p.add_argument("--passes", type=int, default=1, help="clustering passes")
    p.add_argument("--cap-factor", type=float, default=1.0,
                   help="cluster volume cap as a multiple of 2|E|/k")
    p.add_argument("--lambda", dest="lam", type=float, default=1.1,
                   help="HDRF balance weight")
    p.add_argument("--seed", type=int, default=0, help="seed of the fallback hash")
    p.add_argument("--no-verify", action="store_true", help="skip the self-check pass")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--dump-clusters", metavar="PATH",
                   help="write 'vertex cluster' lines after clustering")

    c = sub.add_parser("convert", help="convert an ASCII 'u v' edge list to binary")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--remap", action="store_true",
                   help="relabel IDs densely; writes OUTPUT.ids with the original IDs")

    g = sub.add_parser("generate", help="write a synthetic graph")
    g.add_argument("kind", choices=("planted", "uniform"))
    g.add_argument("output")
    g.add_argument("--clusters", type=int, default=64)
    g.add_argument("--size", type=int, default=40, help="vertices per cluster")
    g.add_argument("--p-intra", type=float, default=0.3)
    g.add_argument("--p-inter", type=float, default=0.001)
    g.add_argument("--vertices", type=int, default=1000, help="uniform: vertex count")
    g.add_argument("--edges", type=int, default=10000, help="uniform: edge count")
    g.add_argument("--seed", type=int, default=0)
    return parser


def _partition_cmd(args) -> int:
    try:
        config = RunConfig(k=args.k, alpha=args.alpha, passes=args.passes,
                           cap_factor=args.cap_factor, algorithm=args.algorithm,
                           lam=args.lam, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run(config, args.input, args.output, verify=not args.no_verify,
                     dump_clusters=args.dump_clusters)
    except (OSError, EdgeFormatError, EdgeStreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.report.to_json() if args.json else result.report.to_text())
    if result.verification is not None:
        for v in result.verification.violations:
            print(f"violation: {v}", file=sys.stderr)
        print(f"verified = {str(result.verification.ok).lower()}", file=sys.stderr)
    return result.status


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "partition":
        return _partition_cmd(args)
    if args.command == "convert":
        stream, ids = convert_text(args.input, args.output, remap=args.remap)
        if ids is not None:
            np.savetxt(args.output + ".ids", ids, fmt="%d")
        print(f"edges = {stream.edge_count}")
        return 0
    if args.kind == "planted":
        stream = generate_planted(PlantedConfig(args.clusters, args.size, args.p_intra,
                                                args.p_inter, args.seed), args.output)
    else:
        stream = generate_uniform(args.vertices, args.edges, args.output, args.seed)
    print(f"edges = {stream.edge_count}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
