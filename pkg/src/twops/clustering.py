"""Streaming vertex clustering with a cluster volume cap.

Every vertex starts in its own cluster the first time it is streamed. For each
edge whose endpoints sit in different clusters, the endpoint whose cluster is
lighter once its own degree is removed migrates into the other endpoint's
cluster, provided that neither cluster is over the cap and the destination
stays within it. Volumes are sums of full (precomputed) degrees, so the cap
holds for the final graph, not just the prefix seen so far.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numba
import numpy as np

from .edge_stream import EdgeStream

NO_CLUSTER = -1


@dataclass
class ClusterState:
    degrees: np.ndarray
    v2c: np.ndarray
    vol: np.ndarray
    max_vol: int
    next_id: int = 0

    @classmethod
    def empty(cls, degrees: np.ndarray, max_vol: int) -> "ClusterState":
        n = len(degrees)
        return cls(
            degrees=np.asarray(degrees, dtype=np.int64),
            v2c=np.full(n, NO_CLUSTER, dtype=np.int64),
            # every vertex creates at most one cluster, ever
            vol=np.zeros(n, dtype=np.int64),
            max_vol=int(max_vol),
        )

    @property
    def volumes(self) -> np.ndarray:
        """Volumes of clusters ``0 .. next_id - 1``."""
        return self.vol[:self.next_id]

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.v2c.tolist()):
            if c != NO_CLUSTER:
                out.setdefault(c, []).append(v)
        return out

    def recount_volumes(self) -> np.ndarray:
        """Volumes rebuilt from scratch out of ``v2c`` and the degrees."""
        mask = self.v2c != NO_CLUSTER
        return np.bincount(self.v2c[mask], weights=self.degrees[mask],
                           minlength=self.next_id).astype(np.int64)

    def check(self) -> list[str]:
        """Bookkeeping violations; empty when the state is consistent."""
        problems = []
        recount = self.recount_volumes()
        if len(recount) > self.next_id:
            problems.append(f"cluster id {len(recount) - 1} >= next_id {self.next_id}")
        elif not np.array_equal(recount, self.volumes):
            bad = np.flatnonzero(recount != self.volumes)
            problems.append(f"volume mismatch in clusters {bad[:10].tolist()}")
        sizes = np.bincount(self.v2c[self.v2c != NO_CLUSTER], minlength=self.next_id)
        over = np.flatnonzero((self.volumes > self.max_vol) & (sizes[:self.next_id] > 1))
        if len(over):
            problems.append(f"multi-member clusters over max_vol: {over[:10].tolist()}")
        return problems

    def dump(self, path) -> None:
        """Write ``vertex cluster`` lines for every clustered vertex."""
        idx = np.flatnonzero(self.v2c != NO_CLUSTER)
        np.savetxt(path, np.column_stack([idx, self.v2c[idx]]), fmt="%d")


def default_volume_cap(edge_count: int, k: int, cap_factor: float = 1.0) -> int:
    """``ceil(cap_factor * 2|E| / k)``: one partition's share of the total volume."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if cap_factor <= 0:
        raise ValueError("cap_factor must be > 0")
    # decimal-exact factor so 1.15 means 115/100, not its binary neighbour
    return math.ceil(Fraction(str(cap_factor)) * 2 * edge_count / k)


@numba.njit(cache=True, inline="always")
def _cluster_edge(d, v2c, vol, max_vol, next_id, u, v):
    if v2c[u] == NO_CLUSTER:
        v2c[u] = next_id
        vol[next_id] = d[u]
        next_id += 1
    if v2c[v] == NO_CLUSTER:
        v2c[v] = next_id
        vol[next_id] = d[v]
        next_id += 1
    cu = v2c[u]
    cv = v2c[v]
    if cu == cv or vol[cu] > max_vol or vol[cv] > max_vol:
        return next_id
    # ties go to the first endpoint as the mover
    if vol[cu] - d[u] <= vol[cv] - d[v]:
        s, cs, cl = u, cu, cv
    else:
        s, cs, cl = v, cv, cu
    if vol[cl] + d[s] <= max_vol:
        vol[cl] += d[s]
        vol[cs] -= d[s]
        v2c[s] = cl
    return next_id


@numba.njit(cache=True)
def _cluster_chunk(edges, d, v2c, vol, max_vol, next_id):
    for i in range(edges.shape[0]):
        next_id = _cluster_edge(d, v2c, vol, max_vol, next_id, edges[i, 0], edges[i, 1])
    return next_id


def cluster_edge(state: ClusterState, u: int, v: int) -> None:
    """Apply one clustering step for edge ``(u, v)`` in place."""
    n = len(state.degrees)
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"edge ({u}, {v}) outside degree table of size {n}")
    state.next_id = int(_cluster_edge(state.degrees, state.v2c, state.vol,
                                      state.max_vol, state.next_id, u, v))


def run_clustering(stream: EdgeStream, degrees: np.ndarray, max_vol: int,
                   passes: int = 1, state: ClusterState | None = None,
                   on_pass: Callable[[int, ClusterState], None] | None = None,
                   ) -> ClusterState:
    """Run ``passes`` clustering passes over ``stream``, carrying state between them.

    ``on_pass(i, state)`` is called after pass ``i`` (1-based) if given.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    if state is None:
        state = ClusterState.empty(degrees, max_vol)
    for i in range(1, passes + 1):
        for chunk in stream.chunks():
            state.next_id = int(_cluster_chunk(chunk, state.degrees, state.v2c, state.vol,
                                               state.max_vol, state.next_id))
        if on_pass is not None:
            on_pass(i, state)
    return state
