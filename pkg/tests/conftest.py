import numpy as np
import pytest

from twops import EdgeStream, write_edges

TWO_TRIANGLES = [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)]

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LOG: list[tuple[str, bool, str]] = []


@pytest.fixture
def two_triangles():
    return EdgeStream.from_array(TWO_TRIANGLES)


@pytest.fixture
def two_triangles_file(tmp_path):
    return write_edges(TWO_TRIANGLES, tmp_path / "tri.bin")


def check_exact_partition(parts, k, edge_count, capacity):
    parts = np.asarray(parts)
    assert len(parts) == edge_count
    if edge_count:
        assert parts.max() < k
    sizes = np.bincount(parts.astype(np.int64), minlength=k)
    assert sizes.sum() == edge_count
    assert sizes.max(initial=0) <= capacity
    return sizes


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
