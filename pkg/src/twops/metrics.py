"""Replication factor, balance and an independent file-based checker."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .edge_stream import TRIPLE_BYTES, EdgeFormatError, EdgeStream, iter_assignment

_UNSET = object()


def vertex_universe(degrees: np.ndarray) -> int:
    """|V| counted as vertices that touch at least one edge."""
    return int(np.count_nonzero(degrees))


def replication_factor(v2p: np.ndarray, n_vertices: int) -> float | None:
    """Average number of partitions per vertex, or ``None`` when there are no vertices.

    ``v2p`` may be a packed uint64 bit matrix or a dense boolean matrix.
    """
    if n_vertices == 0:
        return None
    if v2p.dtype == np.uint64:
        replicas = int(np.bitwise_count(v2p).sum())
    else:
        replicas = int(np.count_nonzero(v2p))
    return replicas / n_vertices


def achieved_alpha(sizes, edge_count: int) -> float | None:
    if edge_count == 0:
        return None
    return len(sizes) * int(np.max(sizes)) / edge_count


@dataclass
class PartitionReport:
    replication_factor: float | None
    sizes: list[int]
    achieved_alpha: float | None
    phase_seconds: dict[str, float] = field(default_factory=dict)
    score_evaluations: int = 0
    edge_count: int = 0
    capacity: int = 0
    algorithm: str = ""
    extra: dict = field(default_factory=dict)

    @classmethod
    def build(cls, sizes, edge_count, replication_factor, phase_seconds=None,
              score_evaluations=0, capacity=0, algorithm="", extra=None):
        sizes = [int(s) for s in sizes]
        return cls(
            replication_factor=replication_factor,
            sizes=sizes,
            achieved_alpha=achieved_alpha(sizes, edge_count),
            phase_seconds=dict(phase_seconds or {}),
            score_evaluations=int(score_evaluations),
            edge_count=int(edge_count),
            capacity=int(capacity),
            algorithm=algorithm,
            extra=dict(extra or {}),
        )

    @property
    def k(self) -> int:
        return len(self.sizes)

    def to_text(self) -> str:
        def fmt(x):
            return "n/a" if x is None else repr(x)

        lines = [
            f"algorithm = {self.algorithm}",
            f"k = {self.k}",
            f"edges = {self.edge_count}",
            f"replication_factor = {fmt(self.replication_factor)}",
            f"achieved_alpha = {fmt(self.achieved_alpha)}",
            f"capacity = {self.capacity}",
            f"max_partition_size = {max(self.sizes) if self.sizes else 0}",
            f"min_partition_size = {min(self.sizes) if self.sizes else 0}",
            f"score_evaluations = {self.score_evaluations}",
        ]
        lines += [f"{key} = {val}" for key, val in self.extra.items()]
        lines += [f"seconds.{ph} = {sec:.6f}" for ph, sec in self.phase_seconds.items()]
        lines.append(f"seconds.total = {sum(self.phase_seconds.values()):.6f}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass
class Violation:
    kind: str
    index: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.index is None else f" at edge {self.index}"
        return f"{self.kind}{where}: {self.message}"


@dataclass
class Verification:
    report: PartitionReport | None
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_assignment(path, stream: EdgeStream, k: int, capacity: int,
                      expected_rf=_UNSET, max_violations: int = 100) -> Verification:
    """Recheck an assignment file using nothing but its triples and the source stream.

    Sizes and the replication factor are rebuilt from scratch with a dense
    vertex-by-partition table, so this shares no state with the partitioners.
    """
    check_rf = expected_rf is not _UNSET
    violations: list[Violation] = []

    def add(kind, index, message):
        if len(violations) < max_violations:
            violations.append(Violation(kind, index, message))

    path = Path(path)
    try:
        size = path.stat().st_size
    except OSError as exc:
        return Verification(None, [Violation("io", None, str(exc))])
    if size % TRIPLE_BYTES:
        err = EdgeFormatError(path, size - size % TRIPLE_BYTES, TRIPLE_BYTES)
        return Verification(None, [Violation("format", None, str(err))])

    n_records = size // TRIPLE_BYTES
    if n_records != stream.edge_count:
        add("edge_count", min(n_records, stream.edge_count),
            f"assignment has {n_records} records, stream has {stream.edge_count} edges")

    sizes = np.zeros(k, dtype=np.int64)
    covered = np.zeros((0, k), dtype=bool)
    over_reported = np.zeros(k, dtype=bool)
    edges = stream.chunks()
    pending = np.empty((0, 2), dtype=np.uint32)
    pos = 0
    for rec in iter_assignment(path):
        while len(pending) < len(rec):
            nxt = next(edges, None)
            if nxt is None:
                break
            pending = np.concatenate([pending, nxt])
        m = min(len(rec), len(pending))
        src, pending = pending[:m], pending[m:]
        mismatch = np.flatnonzero(np.any(rec[:m, :2] != src, axis=1))
        for j in mismatch[:max_violations].tolist():
            add("edge_mismatch", pos + j,
                f"record {tuple(rec[j, :2].tolist())} != stream edge {tuple(src[j].tolist())}")

        p = rec[:, 2].astype(np.int64)
        bad = np.flatnonzero(p >= k)
        for j in bad[:max_violations].tolist():
            add("partition_range", pos + j, f"partition {p[j]} >= k = {k}")
        ok = p < k
        good_p = p[ok]
        uv = rec[ok, :2].astype(np.int64)

        top = int(uv.max()) if len(uv) else -1
        if top >= len(covered):
            grown = np.zeros((max(top + 1, 2 * len(covered)), k), dtype=bool)
            grown[:len(covered)] = covered
            covered = grown
        covered[uv[:, 0], good_p] = True
        covered[uv[:, 1], good_p] = True

        # running sizes per record, to name the first edge that breaks capacity
        added = np.zeros(k, dtype=np.int64)
        for q in np.unique(good_p).tolist():
            idx = np.flatnonzero(p == q)
            running = sizes[q] + np.arange(1, len(idx) + 1)
            over = np.flatnonzero(running > capacity)
            if len(over) and not over_reported[q]:
                over_reported[q] = True
                add("capacity", pos + int(idx[over[0]]),
                    f"partition {q} exceeds capacity {capacity}")
            added[q] = len(idx)
        sizes += added
        pos += len(rec)

    n_vertices = int(np.count_nonzero(covered.any(axis=1))) if len(covered) else 0
    rf = replication_factor(covered, n_vertices)
    if check_rf and rf != expected_rf:
        add("replication_factor", None,
            f"file gives {rf!r}, in-memory run reported {expected_rf!r}")
    report = PartitionReport.build(sizes, pos, rf, capacity=capacity)
    return Verification(report, violations)
