"""Cluster-guided streaming edge partitioning (the second phase of 2PS-L).

Clusters are first packed onto partitions by sorted list scheduling. A pass
over the stream then places every edge whose endpoint clusters share a
partition. A final pass places the remaining edges by scoring only the two
partitions that host the endpoint clusters, so the per-edge cost does not
depend on ``k``.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numba
import numpy as np

from . import _kernels as K
from .clustering import NO_CLUSTER, ClusterState, default_volume_cap, run_clustering
from .config import RunConfig
from .edge_stream import EdgeStream, compute_degrees
from .metrics import PartitionReport, replication_factor, vertex_universe

PHASES = ("degrees", "clustering", "mapping", "prepartitioning", "remaining")

# counter slots shared with the kernels
SCORE_EVALS, PREPARTITIONED, OVERFLOWED, REMAINING = range(4)


def partition_capacity(edge_count: int, k: int, alpha: float) -> int:
    """Largest allowed partition size: ``max(floor(alpha|E|/k), ceil(|E|/k))``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    bound = math.floor(Fraction(str(alpha)) * edge_count / k)
    return max(bound, -(-edge_count // k))


@dataclass
class PartitionState:
    k: int
    capacity: int
    c2p: np.ndarray
    vol_p: np.ndarray
    v2p: np.ndarray
    sizes: np.ndarray
    counters: np.ndarray = field(default_factory=lambda: np.zeros(4, dtype=np.int64))

    @classmethod
    def empty(cls, n_vertices: int, k: int, capacity: int) -> "PartitionState":
        return cls(
            k=k,
            capacity=capacity,
            c2p=np.zeros(0, dtype=np.int64),
            vol_p=np.zeros(k, dtype=np.int64),
            v2p=K.new_bitmatrix(n_vertices, k),
            sizes=np.zeros(k, dtype=np.int64),
        )

    @property
    def score_evaluations(self) -> int:
        return int(self.counters[SCORE_EVALS])

    def replicated(self, v: int, p: int) -> bool:
        return bool(K.test_bit(self.v2p, v, p))


@dataclass
class PartitionAssignment:
    """Partition ID of every edge, aligned with the stream order."""

    stream: EdgeStream
    parts: np.ndarray
    sizes: np.ndarray
    k: int
    alpha: float
    capacity: int

    def __len__(self) -> int:
        return len(self.parts)


@dataclass
class PartitionRun:
    assignment: PartitionAssignment
    report: PartitionReport
    partition_state: PartitionState
    cluster_state: ClusterState | None = None


def map_clusters_to_partitions(vol, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted list scheduling of cluster volumes onto ``k`` partitions.

    Clusters are taken in decreasing volume (ties by cluster ID) and each goes
    to the partition with the smallest accumulated volume (ties by lowest
    index). Returns ``(c2p, vol_p)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    vol = np.asarray(vol, dtype=np.int64)
    c2p = np.zeros(len(vol), dtype=np.int64)
    vol_p = np.zeros(k, dtype=np.int64)
    order = np.argsort(-vol, kind="stable")
    heap = [(0, p) for p in range(k)]
    for c in order.tolist():
        w = int(vol[c])
        load, p = heap[0]
        c2p[c] = p
        if w:
            heapq.heapreplace(heap, (load + w, p))
            vol_p[p] += w
    return c2p, vol_p


@numba.njit(cache=True, inline="always")
def _endpoint_partitions(u, v, v2c, vol, c2p, d, k, seed):
    cu = v2c[u]
    cv = v2c[v]
    pu = c2p[cu] if cu != NO_CLUSTER else -1
    pv = c2p[cv] if cv != NO_CLUSTER else -1
    volu = vol[cu] if cu != NO_CLUSTER else 0
    volv = vol[cv] if cv != NO_CLUSTER else 0
    # an endpoint that was never clustered follows the other one
    if pu < 0:
        pu = pv
    if pv < 0:
        pv = pu
    if pu < 0:
        x = v if d[v] > d[u] else u
        pu = K.hash32(x, seed) % k
        pv = pu
    return pu, pv, volu, volv


@numba.njit(cache=True, inline="always")
def replication_term(u, v, p, du, dv, v2p):
    # g_u + g_v; the both-replicated sum is exactly 3 since the degree shares add to 1
    ru = K.test_bit(v2p, u, p)
    rv = K.test_bit(v2p, v, p)
    if ru and rv:
        return 3.0
    dsum = du + dv
    if ru:
        return 2.0 - (du / dsum if dsum > 0 else 0.5)
    if rv:
        return 2.0 - (dv / dsum if dsum > 0 else 0.5)
    return 0.0


@numba.njit(cache=True, inline="always")
def _score(u, v, p, du, dv, pu, pv, volu, volv, v2p):
    s = replication_term(u, v, p, du, dv, v2p)
    vsum = volu + volv
    if vsum > 0:
        if pu == p and pv == p:
            s += 1.0
        elif pu == p:
            s += volu / vsum
        elif pv == p:
            s += volv / vsum
    return s


@numba.njit(cache=True)
def _two_candidate_target(u, v, pu, pv, volu, volv, d, v2p, sizes, capacity, seed, counters):
    best = 0.0
    target = -1
    s = _score(u, v, pu, d[u], d[v], pu, pv, volu, volv, v2p)
    counters[SCORE_EVALS] += 1
    if s > best:
        best = s
        target = pu
    if pv != pu:
        s = _score(u, v, pv, d[u], d[v], pu, pv, volu, volv, v2p)
        counters[SCORE_EVALS] += 1
        if s > best:
            best = s
            target = pv
    if target < 0:
        target = pu
    if sizes[target] >= capacity:
        target = K.capacity_fallback(u, v, d, sizes, capacity, seed)
    return target


@numba.njit(cache=True)
def _prepartition_chunk(edges, offset, parts, d, v2c, vol, c2p, v2p, sizes,
                        capacity, seed, counters):
    k = sizes.shape[0]
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        pu, pv, volu, volv = _endpoint_partitions(u, v, v2c, vol, c2p, d, k, seed)
        if pu != pv:
            continue
        counters[PREPARTITIONED] += 1
        target = pu
        if sizes[target] >= capacity:
            counters[OVERFLOWED] += 1
            target = _two_candidate_target(u, v, pu, pv, volu, volv, d, v2p, sizes,
                                           capacity, seed, counters)
        K.place(offset + i, u, v, target, parts, v2p, sizes)


@numba.njit(cache=True)
def _remaining_chunk(edges, offset, parts, d, v2c, vol, c2p, v2p, sizes,
                     capacity, seed, counters):
    k = sizes.shape[0]
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        pu, pv, volu, volv = _endpoint_partitions(u, v, v2c, vol, c2p, d, k, seed)
        if pu == pv:
            continue
        counters[REMAINING] += 1
        target = _two_candidate_target(u, v, pu, pv, volu, volv, d, v2p, sizes,
                                       capacity, seed, counters)
        K.place(offset + i, u, v, target, parts, v2p, sizes)


def _check_vertex(cs: ClusterState, x: int) -> None:
    if not 0 <= x < len(cs.v2c):
        raise IndexError(f"vertex {x} outside cluster table of size {len(cs.v2c)}")


def score(u: int, v: int, p: int, cs: ClusterState, ps: PartitionState,
          seed: int = 0) -> float:
    """Placement score of edge ``(u, v)`` on partition ``p``, in ``[0, 4]``.

    Two replication terms reward endpoints already present on ``p`` (the
    lower-degree endpoint earns more), and two cluster terms reward ``p``
    hosting an endpoint's cluster, weighted by that cluster's share of the
    combined volume.
    """
    _check_vertex(cs, u)
    _check_vertex(cs, v)
    pu, pv, volu, volv = _endpoint_partitions(u, v, cs.v2c, cs.vol, ps.c2p,
                                               cs.degrees, ps.k, seed)
    return float(_score(u, v, p, cs.degrees[u], cs.degrees[v], pu, pv, volu, volv, ps.v2p))


def _new_parts(stream: EdgeStream, parts: np.ndarray | None) -> np.ndarray:
    if parts is None:
        return np.zeros(stream.edge_count, dtype=np.uint32)
    if len(parts) != stream.edge_count or parts.dtype != np.uint32:
        raise ValueError("parts buffer must be uint32 with one slot per edge")
    return parts


def _chunk_pass(kernel, stream, parts, cs, ps, seed):
    offset = 0
    for chunk in stream.chunks():
        kernel(chunk, offset, parts, cs.degrees, cs.v2c, cs.vol, ps.c2p, ps.v2p,
               ps.sizes, ps.capacity, seed, ps.counters)
        offset += len(chunk)


def prepartition_edges(stream: EdgeStream, cs: ClusterState, ps: PartitionState,
                       parts: np.ndarray, seed: int = 0) -> None:
    """Place every edge whose endpoint clusters share a partition.

    Edges that find their partition full are placed by the two-candidate
    rule with its capacity fallbacks. Other slots of ``parts`` are left alone.
    """
    _chunk_pass(_prepartition_chunk, stream, parts, cs, ps, seed)


def partition_remaining(stream: EdgeStream, cs: ClusterState, ps: PartitionState,
                        parts: np.ndarray, seed: int = 0) -> None:
    """Place the edges skipped by :func:`prepartition_edges` using two-candidate scoring."""
    _chunk_pass(_remaining_chunk, stream, parts, cs, ps, seed)


def prepare_partition_state(cs: ClusterState, k: int, capacity: int) -> PartitionState:
    ps = PartitionState.empty(len(cs.degrees), k, capacity)
    ps.c2p, ps.vol_p = map_clusters_to_partitions(cs.volumes, k)
    return ps


def _make_run(stream, parts, cs, ps, config, timings) -> PartitionRun:
    assignment = PartitionAssignment(stream, parts, ps.sizes.copy(), config.k,
                                     config.alpha, ps.capacity)
    report = PartitionReport.build(
        sizes=ps.sizes,
        edge_count=stream.edge_count,
        replication_factor=replication_factor(ps.v2p, vertex_universe(cs.degrees)),
        phase_seconds=timings,
        score_evaluations=ps.score_evaluations,
        capacity=ps.capacity,
        algorithm=config.algorithm,
        extra={
            "clusters": int(np.count_nonzero(cs.volumes)),
            "prepartitioned_edges": int(ps.counters[PREPARTITIONED]),
            "overflow_edges": int(ps.counters[OVERFLOWED]),
            "remaining_edges": int(ps.counters[REMAINING]),
        },
    )
    return PartitionRun(assignment, report, ps, cs)


def run_phase_one(stream: EdgeStream, config: RunConfig, timings: dict,
                  on_pass=None) -> tuple[ClusterState, PartitionState]:
    """Degrees, clustering, cluster mapping. Shared by 2PS-L and 2PS-HDRF."""
    t = time.perf_counter()
    degrees = compute_degrees(stream)
    timings["degrees"] = time.perf_counter() - t

    t = time.perf_counter()
    max_vol = default_volume_cap(stream.edge_count, config.k, config.cap_factor)
    cs = run_clustering(stream, degrees, max_vol, config.passes, on_pass=on_pass)
    timings["clustering"] = time.perf_counter() - t

    t = time.perf_counter()
    capacity = partition_capacity(stream.edge_count, config.k, config.alpha)
    ps = prepare_partition_state(cs, config.k, capacity)
    timings["mapping"] = time.perf_counter() - t
    return cs, ps


def run_2psl(stream: EdgeStream, config: RunConfig, parts: np.ndarray | None = None,
             on_pass=None) -> PartitionRun:
    """Full 2PS-L pipeline with per-phase wall-clock timings.

    ``parts`` may be a caller-provided uint32 buffer (e.g. a ``np.memmap``)
    so that nothing proportional to the edge count lives in memory.
    """
    parts = _new_parts(stream, parts)
    timings: dict[str, float] = {}
    cs, ps = run_phase_one(stream, config, timings, on_pass)

    t = time.perf_counter()
    prepartition_edges(stream, cs, ps, parts, config.seed)
    timings["prepartitioning"] = time.perf_counter() - t

    t = time.perf_counter()
    partition_remaining(stream, cs, ps, parts, config.seed)
    timings["remaining"] = time.perf_counter() - t
    return _make_run(stream, parts, cs, ps, config, timings)
