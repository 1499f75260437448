"""Comparison partitioners: DBH, HDRF and 2PS-HDRF.

All of them share the capacity rule of the 2PS-L pipeline: a partition that
has reached capacity is never chosen, the edge instead goes to the hash of its
higher-degree endpoint or, failing that, the least loaded partition.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numba
import numpy as np

from . import _kernels as K
from .config import RunConfig
from .edge_stream import EdgeStream, compute_degrees
from .metrics import PartitionReport, replication_factor, vertex_universe
from .partitioning import (
    REMAINING, SCORE_EVALS,
    PartitionAssignment, PartitionRun, PartitionState, _endpoint_partitions,
    _make_run, _new_parts, partition_capacity, prepartition_edges, replication_term,
    run_phase_one,
)

HDRF_EPSILON = 1.0
HDRF_LAMBDA = 1.1


@dataclass
class HdrfState:
    degrees: np.ndarray
    v2p: np.ndarray
    sizes: np.ndarray
    lam: float = HDRF_LAMBDA
    epsilon: float = HDRF_EPSILON

    @classmethod
    def empty(cls, degrees, k: int, lam: float = HDRF_LAMBDA,
              epsilon: float = HDRF_EPSILON) -> "HdrfState":
        degrees = np.asarray(degrees, dtype=np.int64)
        return cls(degrees, K.new_bitmatrix(len(degrees), k),
                   np.zeros(k, dtype=np.int64), lam, epsilon)

    @property
    def k(self) -> int:
        return len(self.sizes)


@numba.njit(cache=True, inline="always")
def _dbh_target(u, v, d, k, seed):
    x = v if d[v] < d[u] else u
    return K.hash32(x, seed) % k


def dbh_assign(u: int, v: int, degrees: np.ndarray, k: int, seed: int = 0) -> int:
    """Hash of the lower-degree endpoint modulo ``k`` (``u`` on equal degree)."""
    return int(_dbh_target(u, v, np.asarray(degrees, dtype=np.int64), k, seed))


@numba.njit(cache=True, inline="always")
def _hdrf_score(u, v, p, du, dv, v2p, sizes, maxsize, minsize, lam, eps):
    rep = replication_term(u, v, p, du, dv, v2p)
    return rep + lam * (maxsize - sizes[p]) / (eps + maxsize - minsize)


@numba.njit(cache=True)
def _hdrf_target(u, v, d, v2p, sizes, capacity, lam, eps, seed, counters):
    k = sizes.shape[0]
    maxsize = sizes[0]
    minsize = sizes[0]
    for p in range(1, k):
        if sizes[p] > maxsize:
            maxsize = sizes[p]
        if sizes[p] < minsize:
            minsize = sizes[p]
    best = -np.inf
    target = 0
    for p in range(k):
        s = _hdrf_score(u, v, p, d[u], d[v], v2p, sizes, maxsize, minsize, lam, eps)
        if s > best:
            best = s
            target = p
    counters[SCORE_EVALS] += k
    if sizes[target] >= capacity:
        target = K.capacity_fallback(u, v, d, sizes, capacity, seed)
    return target


@numba.njit(cache=True)
def _hdrf_chunk(edges, offset, parts, d, v2p, sizes, capacity, lam, eps, seed, counters):
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        t = _hdrf_target(u, v, d, v2p, sizes, capacity, lam, eps, seed, counters)
        K.place(offset + i, u, v, t, parts, v2p, sizes)


@numba.njit(cache=True)
def _hdrf_remaining_chunk(edges, offset, parts, d, v2c, vol, c2p, v2p, sizes,
                          capacity, lam, eps, seed, counters):
    k = sizes.shape[0]
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        pu, pv, volu, volv = _endpoint_partitions(u, v, v2c, vol, c2p, d, k, seed)
        if pu == pv:
            continue
        counters[REMAINING] += 1
        t = _hdrf_target(u, v, d, v2p, sizes, capacity, lam, eps, seed, counters)
        K.place(offset + i, u, v, t, parts, v2p, sizes)


@numba.njit(cache=True)
def _dbh_chunk(edges, offset, parts, d, v2p, sizes, capacity, seed):
    k = sizes.shape[0]
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        t = _dbh_target(u, v, d, k, seed)
        if sizes[t] >= capacity:
            t = K.capacity_fallback(u, v, d, sizes, capacity, seed)
        K.place(offset + i, u, v, t, parts, v2p, sizes)


def hdrf_score(u: int, v: int, p: int, state: HdrfState) -> float:
    """Replication score plus balance score of placing ``(u, v)`` on ``p``."""
    if not 0 <= p < state.k:
        raise IndexError(f"partition {p} outside [0, {state.k})")
    sizes = state.sizes
    return float(_hdrf_score(u, v, p, state.degrees[u], state.degrees[v], state.v2p,
                             sizes, sizes.max(), sizes.min(), state.lam, state.epsilon))


def _single_pass_run(stream, config, parts, degrees, state, counters, t_degrees, t_part,
                     capacity) -> PartitionRun:
    assignment = PartitionAssignment(stream, parts, state.sizes.copy(), config.k,
                                     config.alpha, capacity)
    report = PartitionReport.build(
        sizes=state.sizes,
        edge_count=stream.edge_count,
        replication_factor=replication_factor(state.v2p, vertex_universe(degrees)),
        phase_seconds={"degrees": t_degrees, "partitioning": t_part},
        score_evaluations=int(counters[SCORE_EVALS]),
        capacity=capacity,
        algorithm=config.algorithm,
    )
    ps = PartitionState(k=config.k, capacity=capacity, c2p=np.zeros(0, dtype=np.int64),
                        vol_p=np.zeros(config.k, dtype=np.int64), v2p=state.v2p,
                        sizes=state.sizes, counters=counters)
    return PartitionRun(assignment, report, ps, None)


def hdrf_partition(stream: EdgeStream, config: RunConfig,
                   parts: np.ndarray | None = None) -> PartitionRun:
    """One-pass HDRF: every edge is scored against all ``k`` partitions."""
    parts = _new_parts(stream, parts)
    t = time.perf_counter()
    degrees = compute_degrees(stream)
    t_degrees = time.perf_counter() - t

    t = time.perf_counter()
    capacity = partition_capacity(stream.edge_count, config.k, config.alpha)
    state = HdrfState.empty(degrees, config.k, config.lam)
    counters = np.zeros(4, dtype=np.int64)
    offset = 0
    for chunk in stream.chunks():
        _hdrf_chunk(chunk, offset, parts, state.degrees, state.v2p, state.sizes, capacity,
                    state.lam, state.epsilon, config.seed, counters)
        offset += len(chunk)
    t_part = time.perf_counter() - t
    return _single_pass_run(stream, config, parts, degrees, state, counters,
                            t_degrees, t_part, capacity)


def dbh_partition(stream: EdgeStream, config: RunConfig,
                  parts: np.ndarray | None = None) -> PartitionRun:
    parts = _new_parts(stream, parts)
    t = time.perf_counter()
    degrees = compute_degrees(stream)
    t_degrees = time.perf_counter() - t

    t = time.perf_counter()
    capacity = partition_capacity(stream.edge_count, config.k, config.alpha)
    state = HdrfState.empty(degrees, config.k)
    offset = 0
    for chunk in stream.chunks():
        _dbh_chunk(chunk, offset, parts, state.degrees, state.v2p, state.sizes, capacity,
                   config.seed)
        offset += len(chunk)
    t_part = time.perf_counter() - t
    return _single_pass_run(stream, config, parts, degrees, state,
                            np.zeros(4, dtype=np.int64), t_degrees, t_part, capacity)


def run_2ps_hdrf(stream: EdgeStream, config: RunConfig, parts: np.ndarray | None = None,
                 on_pass=None) -> PartitionRun:
    """2PS-L phase one and pre-partitioning, then HDRF over all ``k`` for the rest."""
    parts = _new_parts(stream, parts)
    timings: dict[str, float] = {}
    cs, ps = run_phase_one(stream, config, timings, on_pass)

    t = time.perf_counter()
    prepartition_edges(stream, cs, ps, parts, config.seed)
    timings["prepartitioning"] = time.perf_counter() - t

    t = time.perf_counter()
    offset = 0
    for chunk in stream.chunks():
        _hdrf_remaining_chunk(chunk, offset, parts, cs.degrees, cs.v2c, cs.vol, ps.c2p,
                              ps.v2p, ps.sizes, ps.capacity, config.lam, HDRF_EPSILON,
                              config.seed, ps.counters)
        offset += len(chunk)
    timings["remaining"] = time.perf_counter() - t
    return _make_run(stream, parts, cs, ps, config, timings)
