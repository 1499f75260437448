"""Seeded synthetic graphs: planted partitions and uniform random edge lists.

Pairs are sampled independently with geometric skips over a linear pair
index, so the cost scales with the number of edges rather than the number of
vertex pairs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edge_stream import EdgeStream, write_edges


@dataclass(frozen=True)
class PlantedConfig:
    clusters: int
    vertices_per_cluster: int
    p_intra: float
    p_inter: float
    seed: int = 0

    def __post_init__(self):
        if self.clusters < 1 or self.vertices_per_cluster < 1:
            raise ValueError("clusters and vertices_per_cluster must be >= 1")
        for name in ("p_intra", "p_inter"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not self.p_intra > self.p_inter:
            raise ValueError("p_intra must exceed p_inter")

    @property
    def n_vertices(self) -> int:
        return self.clusters * self.vertices_per_cluster

    @property
    def intra_pairs(self) -> int:
        m = self.vertices_per_cluster
        return self.clusters * (m * (m - 1) // 2)

    @property
    def inter_pairs(self) -> int:
        n = self.n_vertices
        return n * (n - 1) // 2 - self.intra_pairs

    def expected_edges(self) -> float:
        return self.intra_pairs * self.p_intra + self.inter_pairs * self.p_inter

    def edge_std(self) -> float:
        return float(np.sqrt(self.intra_pairs * self.p_intra * (1 - self.p_intra)
                             + self.inter_pairs * self.p_inter * (1 - self.p_inter)))


def bernoulli_indices(rng: np.random.Generator, total: int, p: float,
                      batch: int = 1 << 20) -> np.ndarray:
    """Indices in ``[0, total)`` each kept independently with probability ``p``."""
    if total <= 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    out = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            out.append(idx[idx < total])
            break
        out.append(idx)
        pos = int(idx[-1])
    return np.concatenate(out)


def pair_from_index(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of ``t = j*(j-1)/2 + i`` for pairs ``i < j``."""
    t = np.asarray(t, dtype=np.int64)
    j = ((1 + np.sqrt(1 + 8 * t.astype(np.float64))) / 2).astype(np.int64)
    # float rounding can be off by one either way
    j -= (j * (j - 1) // 2) > t
    j += ((j + 1) * j // 2) <= t
    i = t - j * (j - 1) // 2
    return i, j


def planted_edges(config: PlantedConfig) -> np.ndarray:
    """Edge array of a planted-partition graph, shuffled and randomly oriented.

    Vertex ``x`` belongs to cluster ``x // vertices_per_cluster``.
    """
    rng = np.random.default_rng(config.seed)
    m = config.vertices_per_cluster
    per_cluster = m * (m - 1) // 2

    intra = bernoulli_indices(rng, config.intra_pairs, config.p_intra)
    if per_cluster:
        c, local = np.divmod(intra, per_cluster)
        i, j = pair_from_index(local)
        intra_edges = np.column_stack([c * m + i, c * m + j])
    else:
        intra_edges = np.empty((0, 2), dtype=np.int64)

    # draw over all pairs, keep only cross-cluster ones: still Bernoulli(p_inter) each
    n = config.n_vertices
    cand = bernoulli_indices(rng, n * (n - 1) // 2, config.p_inter)
    i, j = pair_from_index(cand)
    cross = (i // m) != (j // m)
    inter_edges = np.column_stack([i[cross], j[cross]])

    edges = np.concatenate([intra_edges, inter_edges]).astype(np.int64)
    flip = rng.random(len(edges)) < 0.5
    edges[flip] = edges[flip][:, ::-1]
    return edges[rng.permutation(len(edges))]


def generate_planted(config: PlantedConfig, path) -> EdgeStream:
    return write_edges(planted_edges(config), path)


def uniform_edges(n_vertices: int, n_edges: int, seed: int = 0) -> np.ndarray:
    """``n_edges`` edges with endpoints drawn uniformly (self-loops and repeats allowed)."""
    if n_vertices < 1:
        raise ValueError("n_vertices must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, n_vertices, size=(n_edges, 2), dtype=np.int64)


def generate_uniform(n_vertices: int, n_edges: int, path, seed: int = 0) -> EdgeStream:
    return write_edges(uniform_edges(n_vertices, n_edges, seed), path)
