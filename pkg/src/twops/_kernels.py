"""Shared numba primitives: vertex hashing, replication bit matrix, capacity fallback."""
import numba
import numpy as np

MASK32 = 0xFFFFFFFF
_GOLDEN = 0x9E3779B9


@numba.njit(cache=True, inline="always")
def hash32(x, seed):
    # murmur3 finalizer over (x + seed * golden ratio); all arithmetic kept in int64
    h = (np.int64(x) + (np.int64(seed) & MASK32) * _GOLDEN) & MASK32
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & MASK32
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & MASK32
    h ^= h >> 16
    return h


def hash32_py(x: int, seed: int) -> int:
    """Pure-Python twin of :func:`hash32`."""
    h = (x + (seed & MASK32) * _GOLDEN) & MASK32
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & MASK32
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & MASK32
    h ^= h >> 16
    return h


def new_bitmatrix(n_vertices: int, k: int) -> np.ndarray:
    """Zeroed ``n_vertices x k`` bit matrix packed into uint64 words."""
    return np.zeros((n_vertices, (k + 63) // 64), dtype=np.uint64)


@numba.njit(cache=True, inline="always")
def set_bit(bits, v, p):
    bits[v, p >> 6] |= np.uint64(1) << np.uint64(p & 63)


@numba.njit(cache=True, inline="always")
def test_bit(bits, v, p):
    return (bits[v, p >> 6] >> np.uint64(p & 63)) & np.uint64(1) != 0


def bitmatrix_to_bool(bits: np.ndarray, k: int) -> np.ndarray:
    """Unpack to a dense ``(n, k)`` boolean array (debugging and tests)."""
    as_bytes = bits.astype("<u8").view(np.uint8).reshape(len(bits), -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :k].astype(bool)


@numba.njit(cache=True)
def least_loaded(sizes):
    best = 0
    for p in range(1, sizes.shape[0]):
        if sizes[p] < sizes[best]:
            best = p
    return best


@numba.njit(cache=True)
def capacity_fallback(u, v, d, sizes, capacity, seed):
    """Hash the higher-degree endpoint; if that partition is full, take the least loaded."""
    x = v if d[v] > d[u] else u
    p = hash32(x, seed) % sizes.shape[0]
    if sizes[p] < capacity:
        return p
    return least_loaded(sizes)


@numba.njit(cache=True, inline="always")
def place(i, u, v, p, parts, bits, sizes):
    parts[i] = p
    set_bit(bits, u, p)
    set_bit(bits, v, p)
    sizes[p] += 1
