"""Binary edge-list I/O.

Edges are stored as pairs of little-endian unsigned 32-bit vertex IDs with no
header (8 bytes per edge). Assignments are written as ``(first, second,
partition)`` triples of the same integer type (12 bytes per edge).

An :class:`EdgeStream` never holds the whole edge list in memory when it is
backed by a file: every pass re-opens the file and reads it in fixed-size
chunks, so two passes always deliver the same sequence.
"""
from __future__ import annotations

import io
import itertools
from pathlib import Path
from typing import Callable, Iterator

import numba
import numpy as np

EDGE_BYTES = 8
TRIPLE_BYTES = 12
EDGE_DTYPE = np.dtype("<u4")
DEFAULT_CHUNK_EDGES = 1 << 20


class EdgeFormatError(ValueError):
    """Raised when a binary file is not a whole number of records."""

    def __init__(self, path, offset: int, record_bytes: int = EDGE_BYTES):
        self.path = path
        self.offset = offset
        super().__init__(
            f"{path}: truncated {record_bytes}-byte record at byte offset {offset}"
        )


class EdgeStreamError(IOError):
    """I/O failure in the middle of a pass."""

    def __init__(self, path, offset: int, cause: BaseException | None = None):
        self.path = path
        self.offset = offset
        msg = f"{path}: read failed at byte offset {offset}"
        if cause is not None:
            msg += f" ({cause})"
        super().__init__(msg)


class VertexRangeError(ValueError):
    pass


class EdgeStream:
    """Re-openable sequential source of edges.

    Use :func:`open_stream` for files and :meth:`from_array` for in-memory
    edge arrays (tests, small graphs).
    """

    def __init__(self, source, edge_count: int, max_vertex_id: int | None = None,
                 chunk_edges: int = DEFAULT_CHUNK_EDGES):
        if chunk_edges < 1:
            raise ValueError("chunk_edges must be >= 1")
        self._source = source
        self.edge_count = int(edge_count)
        self._declared_max = max_vertex_id
        self._observed_max: int | None = None
        self.chunk_edges = int(chunk_edges)

    @classmethod
    def from_array(cls, edges, max_vertex_id: int | None = None,
                   chunk_edges: int = DEFAULT_CHUNK_EDGES) -> "EdgeStream":
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() > 0xFFFFFFFF):
            raise VertexRangeError("vertex IDs must fit in an unsigned 32-bit integer")
        arr = np.ascontiguousarray(arr, dtype=np.uint32)
        return cls(arr, len(arr), max_vertex_id, chunk_edges)

    @property
    def path(self) -> Path | None:
        return self._source if isinstance(self._source, Path) else None

    @property
    def declared_max_vertex_id(self) -> int | None:
        return self._declared_max

    @property
    def max_vertex_id(self) -> int:
        """Declared maximum ID, or the largest ID seen (costs one pass the first time).

        Returns -1 for an empty stream without a declared maximum.
        """
        if self._declared_max is not None:
            return self._declared_max
        if self._observed_max is None:
            m = -1
            for chunk in self.chunks():
                if len(chunk):
                    m = max(m, int(chunk.max()))
            self._observed_max = m
        return self._observed_max

    def __len__(self) -> int:
        return self.edge_count

    def __repr__(self) -> str:
        src = self.path if self.path is not None else "<memory>"
        return f"EdgeStream({src!s}, edge_count={self.edge_count})"

    def chunks(self) -> Iterator[np.ndarray]:
        """Yield the edges as consecutive ``(n, 2)`` uint32 arrays."""
        if isinstance(self._source, np.ndarray):
            for start in range(0, self.edge_count, self.chunk_edges):
                yield self._source[start:start + self.chunk_edges]
            return
        yield from self._file_chunks()

    def _file_chunks(self) -> Iterator[np.ndarray]:
        path = self._source
        offset = 0
        remaining = self.edge_count
        try:
            fh = open(path, "rb", buffering=0)
        except OSError as exc:
            raise EdgeStreamError(path, 0, exc) from exc
        with fh:
            while remaining:
                n = min(remaining, self.chunk_edges)
                want = n * EDGE_BYTES
                buf = bytearray(want)
                try:
                    got = _read_full(fh, memoryview(buf))
                except OSError as exc:
                    raise EdgeStreamError(path, offset, exc) from exc
                if got != want:
                    raise EdgeStreamError(
                        path, offset + got, EOFError("file shrank during pass"))
                arr = np.frombuffer(buf, dtype=EDGE_DTYPE).reshape(n, 2)
                yield arr.astype(np.uint32, copy=False)
                offset += want
                remaining -= n

    def __iter__(self) -> Iterator[tuple[int, int]]:
        for chunk in self.chunks():
            yield from map(tuple, chunk.tolist())

    def to_array(self) -> np.ndarray:
        """Materialize every edge. Only for graphs known to fit in memory."""
        if isinstance(self._source, np.ndarray):
            return self._source
        parts = list(self.chunks())
        if not parts:
            return np.empty((0, 2), dtype=np.uint32)
        return np.concatenate(parts)


def _read_full(fh, view: memoryview) -> int:
    got = 0
    while got < len(view):
        n = fh.readinto(view[got:])
        if not n:
            break
        got += n
    return got


def open_stream(path, max_vertex_id: int | None = None,
                chunk_edges: int = DEFAULT_CHUNK_EDGES) -> EdgeStream:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"edge list not found: {path}")
    size = path.stat().st_size
    if size % EDGE_BYTES:
        raise EdgeFormatError(path, size - size % EDGE_BYTES)
    return EdgeStream(path, size // EDGE_BYTES, max_vertex_id, chunk_edges)


def for_each_edge(stream: EdgeStream, visitor: Callable[[int, int], object]) -> None:
    """Call ``visitor(first, second)`` once per edge, in file order."""
    for first, second in stream:
        visitor(first, second)


def write_edges(edges, path) -> EdgeStream:
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() > 0xFFFFFFFF):
        raise VertexRangeError("vertex IDs must fit in an unsigned 32-bit integer")
    path = Path(path)
    arr.astype(EDGE_DTYPE).tofile(path)
    return open_stream(path)


@numba.njit(cache=True)
def _count_degrees(edges, d):
    # returns the row of the first out-of-range endpoint, or -1
    n = d.shape[0]
    for i in range(edges.shape[0]):
        u = edges[i, 0]
        v = edges[i, 1]
        if u >= n or v >= n:
            return i
        d[u] += 1
        d[v] += 1
    return -1


def compute_degrees(stream: EdgeStream) -> np.ndarray:
    """Exact degree of every vertex ID in ``[0, max_vertex_id]``.

    Both endpoints of every edge are counted, so a self-loop adds 2 to its
    vertex and ``d.sum() == 2 * stream.edge_count``. With a declared maximum
    the table has exactly that size and larger IDs raise
    :class:`VertexRangeError`; otherwise the table grows as IDs are seen.
    """
    declared = stream.declared_max_vertex_id
    if declared is not None:
        d = np.zeros(declared + 1, dtype=np.int64)
        seen = 0
        for chunk in stream.chunks():
            bad = _count_degrees(chunk, d)
            if bad >= 0:
                u, v = (int(x) for x in chunk[bad])
                raise VertexRangeError(
                    f"edge {seen + bad} ({u}, {v}) exceeds declared max vertex id {declared}")
            seen += len(chunk)
        return d

    d = np.zeros(0, dtype=np.int64)
    top = -1
    for chunk in stream.chunks():
        if not len(chunk):
            continue
        m = int(chunk.max())
        if m >= len(d):
            grown = np.zeros(max(m + 1, 2 * len(d)), dtype=np.int64)
            grown[:len(d)] = d
            d = grown
        top = max(top, m)
        _count_degrees(chunk, d)
    stream._observed_max = top
    return d[:top + 1].copy()


def write_assignment(assignment, path) -> None:
    """Write ``(first, second, partition)`` triples in stream order."""
    parts = assignment.parts
    k = assignment.k
    stream = assignment.stream
    if len(parts) != stream.edge_count:
        raise ValueError(
            f"assignment has {len(parts)} entries for {stream.edge_count} edges")
    with open(path, "wb") as fh:
        start = 0
        for chunk in stream.chunks():
            p = np.asarray(parts[start:start + len(chunk)])
            if len(p) and int(p.max()) >= k:
                bad = start + int(np.argmax(p >= k))
                raise ValueError(
                    f"edge {bad} assigned to partition {int(parts[bad])}, but k = {k}")
            rec = np.empty((len(chunk), 3), dtype=EDGE_DTYPE)
            rec[:, :2] = chunk
            rec[:, 2] = p
            fh.write(rec.tobytes())
            start += len(chunk)


def iter_assignment(path, chunk_records: int = DEFAULT_CHUNK_EDGES) -> Iterator[np.ndarray]:
    """Yield ``(n, 3)`` uint32 blocks of an assignment file."""
    path = Path(path)
    size = path.stat().st_size
    if size % TRIPLE_BYTES:
        raise EdgeFormatError(path, size - size % TRIPLE_BYTES, TRIPLE_BYTES)
    total = size // TRIPLE_BYTES
    with open(path, "rb") as fh:
        for start in range(0, total, chunk_records):
            n = min(chunk_records, total - start)
            raw = fh.read(n * TRIPLE_BYTES)
            if len(raw) != n * TRIPLE_BYTES:
                raise EdgeStreamError(path, start * TRIPLE_BYTES + len(raw))
            yield np.frombuffer(raw, dtype=EDGE_DTYPE).reshape(n, 3).astype(np.uint32)


def read_assignment(path) -> np.ndarray:
    blocks = list(iter_assignment(path))
    if not blocks:
        return np.empty((0, 3), dtype=np.uint32)
    return np.concatenate(blocks)


def convert_text(text_path, out_path, remap: bool = False,
                 block_lines: int = 1 << 20) -> tuple[EdgeStream, np.ndarray | None]:
    """Convert an ASCII ``u v`` per line edge list to the binary format.

    Lines starting with ``#`` or ``%`` are skipped. With ``remap=True`` the IDs
    are relabelled densely in order of first appearance and the returned array
    maps new IDs back to the original ones.
    """
    mapping: dict[int, int] = {}
    with open(text_path, "r") as src, open(out_path, "wb") as dst:
        lines = (ln for ln in src if ln.strip() and ln[0] not in "#%")
        while True:
            block = list(itertools.islice(lines, block_lines))
            if not block:
                break
            arr = np.loadtxt(io.StringIO("".join(block)), dtype=np.int64,
                             usecols=(0, 1), ndmin=2)
            if remap:
                flat = arr.ravel()
                out = np.empty_like(flat)
                for i, x in enumerate(flat.tolist()):
                    out[i] = mapping.setdefault(x, len(mapping))
                arr = out.reshape(-1, 2)
            if arr.size and (arr.min() < 0 or arr.max() > 0xFFFFFFFF):
                raise VertexRangeError(
                    f"{text_path}: vertex IDs must fit in an unsigned 32-bit integer")
            dst.write(arr.astype(EDGE_DTYPE).tobytes())
    inverse = None
    if remap:
        inverse = np.empty(len(mapping), dtype=np.int64)
        for orig, new in mapping.items():
            inverse[new] = orig
    return open_stream(out_path), inverse
