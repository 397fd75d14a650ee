"""Exact rational rank / nullspace on lists of Fraction rows."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row]
            for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _to_dm(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : rows . v = 0}, from the reduced echelon form.

    Each basis vector has a 1 in its free pivot position, so the output is
    deterministic for a given input.
    """
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    rref, pivots = _to_dm(rows, ncols).rref()
    dense = rref.to_list()
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -_from_qq(dense[r][f])
        basis.append(v)
    return basis
