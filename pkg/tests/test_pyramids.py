import numpy as np
import pytest
from hypothesis import given, strategies as st

from gwalg.pyramids import (EmptyPartition, IndexOutOfRange, NonPositivePart,
                            NotWeaklyIncreasing, build, parse_partition)


@st.composite
def partitions(draw, max_rows=5, max_part=5):
    parts = draw(st.lists(st.integers(1, max_part), min_size=1, max_size=max_rows))
    return tuple(sorted(parts))


def test_build_235():
    p = build((2, 3, 5))
    assert (p.N, p.n, p.l) == (10, 3, 5)
    assert p.column_heights == (3, 3, 2, 1, 1)


def test_trivial_shapes():
    assert build((1,)).column_heights == (1,)
    col = build((1, 1, 1))
    assert col.N == 3 and col.column_heights == (3,)


@pytest.mark.parametrize("parts, exc", [
    ((), EmptyPartition),
    ((0, 2), NonPositivePart),
    ((3, 2), NotWeaklyIncreasing),
])
def test_bad_partitions(parts, exc):
    with pytest.raises(exc):
        build(parts)


def test_row_col_tableau():
    p = build((2, 3, 5))
    assert p.row_col(5) == (2, 3)
    assert p.row_col(10) == (3, 5)
    assert p.row_col(1) == (1, 1)
    with pytest.raises(IndexOutOfRange):
        p.row_col(11)


def test_nilpotent_235():
    e = build((2, 3, 5)).nilpotent_matrix()
    expected = np.zeros((10, 10), dtype=np.int64)
    for a, b in [(1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9), (9, 10)]:
        expected[a - 1, b - 1] = 1
    assert (e == expected).all()


def test_nilpotent_small():
    assert not build((1, 1)).nilpotent_matrix().any()
    e = build((3,)).nilpotent_matrix()
    assert e[0, 1] == 1 and e[1, 2] == 1 and e.sum() == 2


def test_parse_and_str():
    p = parse_partition("2, 3,5")
    assert p.parts == (2, 3, 5)
    assert str(p) == "2,3,5"


@given(partitions())
def test_pyramid_invariants(parts):
    p = build(parts)
    q = p.column_heights
    assert sum(q) == p.N
    assert all(a >= b for a, b in zip(q, q[1:]))
    boxes = {p.row_col(a) for a in range(1, p.N + 1)}
    assert len(boxes) == p.N
    assert all(p.box(*p.row_col(a)) == a for a in range(1, p.N + 1))


@given(partitions())
def test_jordan_type(parts):
    p = build(parts)
    e = p.nilpotent_matrix()
    assert not np.linalg.matrix_power(e, p.l).any()
    assert np.linalg.matrix_rank(e) == p.N - p.n
