"""Left-justified pyramids attached to partitions and their row-by-row tableaux."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class PartitionError(ValueError):
    pass


class EmptyPartition(PartitionError):
    pass


class NonPositivePart(PartitionError):
    pass


class NotWeaklyIncreasing(PartitionError):
    pass


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class Pyramid:
    """A partition lambda_1 <= ... <= lambda_n drawn as left-justified rows.

    Boxes are numbered 1..N row by row, top row first.
    """

    parts: tuple[int, ...]
    _row: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _col: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise EmptyPartition("partition must have at least one part")
        if any(p < 1 for p in parts):
            raise NonPositivePart(f"all parts must be positive: {parts}")
        if any(a > b for a, b in zip(parts, parts[1:])):
            raise NotWeaklyIncreasing(
                f"parts must be given weakly increasing: {parts}")
        rows, cols = [], []
        for i, length in enumerate(parts, start=1):
            for c in range(1, length + 1):
                rows.append(i)
                cols.append(c)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "_row", tuple(rows))
        object.__setattr__(self, "_col", tuple(cols))

    @property
    def N(self) -> int:
        return len(self._row)

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def l(self) -> int:
        return self.parts[-1]

    @property
    def column_heights(self) -> tuple[int, ...]:
        return tuple(sum(1 for p in self.parts if p >= c)
                     for c in range(1, self.l + 1))

    def part(self, i: int) -> int:
        """lambda_i with 1-based i."""
        return self.parts[i - 1]

    def row_col(self, a: int) -> tuple[int, int]:
        if not 1 <= a <= self.N:
            raise IndexOutOfRange(f"box {a} outside 1..{self.N}")
        return self._row[a - 1], self._col[a - 1]

    def row(self, a: int) -> int:
        return self.row_col(a)[0]

    def col(self, a: int) -> int:
        return self.row_col(a)[1]

    def box(self, row: int, col: int) -> int:
        """Entry in the given (row, col) position."""
        if not (1 <= row <= self.n and 1 <= col <= self.part(row)):
            raise IndexOutOfRange(f"no box at ({row}, {col})")
        return sum(self.parts[:row - 1]) + col

    def nilpotent_matrix(self) -> np.ndarray:
        """Sum of e_{a,a+1} over horizontally adjacent boxes (Jordan type lambda)."""
        e = np.zeros((self.N, self.N), dtype=np.int64)
        for a in range(1, self.N):
            if self.row(a) == self.row(a + 1):
                e[a - 1, a] = 1
        return e

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def build(parts: Sequence[int]) -> Pyramid:
    return Pyramid(tuple(parts))


def parse_partition(text: str) -> Pyramid:
    """Parse the comma-separated form, e.g. ``"2,3,5"``."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        parts = [int(s) for s in items]
    except ValueError as exc:
        raise PartitionError(f"cannot parse partition {text!r}") from exc
    return Pyramid(tuple(parts))


def row_partition(n: int) -> Pyramid:
    """The single-row pyramid (n), the principal shape."""
    return Pyramid((n,))


def column_partition(n: int) -> Pyramid:
    return Pyramid((1,) * n)


def minimal_partition(n: int) -> Pyramid:
    """(1, ..., 1, 2) with n boxes."""
    if n < 2:
        raise PartitionError("minimal shape needs n >= 2")
    return Pyramid((1,) * (n - 2) + (2,))
