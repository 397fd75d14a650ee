"""Explicit generators of the finite algebras U(lambda, mu).

Principal shape mu = (n): coefficients of the column determinant of the
matrix M. Minimal shape mu = (1, ..., 1, 2): the B1 elements and the
quadratic weight-2 family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from . import linalg
from .centralizer import CentElt, GenIndex, GradedData
from .pyramids import Pyramid, minimal_partition, row_partition
from .uea import UEA, UEAElement, gr_linear_part


class BadMu(ValueError):
    pass


class XUPoly:
    """Polynomial in commuting x, u with coefficients in U(a)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: UEA, terms: dict[tuple[int, int], UEAElement] | None = None):
        self.alg = alg
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def x(cls, alg: UEA) -> XUPoly:
        return cls(alg, {(1, 0): alg.one()})

    @classmethod
    def const(cls, alg: UEA, c) -> XUPoly:
        return cls(alg, {(0, 0): alg.scalar(c)})

    def __add__(self, other: XUPoly) -> XUPoly:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return XUPoly(self.alg, out)

    def __mul__(self, other) -> XUPoly:
        if isinstance(other, (int, Fraction)):
            return XUPoly(self.alg, {k: v * other for k, v in self.terms.items()})
        out: dict[tuple[int, int], UEAElement] = {}
        for (xa, ua), va in self.terms.items():
            for (xb, ub), vb in other.terms.items():
                key = (xa + xb, ua + ub)
                prod = va * vb
                out[key] = out[key] + prod if key in out else prod
        return XUPoly(self.alg, out)

    __rmul__ = __mul__

    def coeff(self, xdeg: int, udeg: int) -> UEAElement:
        return self.terms.get((xdeg, udeg), self.alg.zero())

    def x_coeff(self, xdeg: int) -> dict[int, UEAElement]:
        return {u: v for (x, u), v in self.terms.items() if x == xdeg}

    def __eq__(self, other) -> bool:
        return isinstance(other, XUPoly) and self.terms == other.terms


def _epsilon(alg: UEA, lam: Pyramid, i: int, j: int) -> XUPoly:
    lj, li = lam.part(j), lam.part(i)
    start = 0 if i >= j else lj - li
    return XUPoly(alg, {(0, r): alg.gen((i, j, r)) for r in range(start, lj)})


def principal_matrix(lam: Pyramid, alg: UEA | None = None) -> list[list[XUPoly]]:
    if alg is None:
        alg = UEA(GradedData(lam, row_partition(lam.n)))
    n = lam.n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            entry = _epsilon(alg, lam, i, j)
            if i == j:
                entry = entry + XUPoly.x(alg) + XUPoly.const(alg, (n - i) * lam.part(i))
            row.append(entry)
        rows.append(row)
    return rows


def _sign(perm: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def column_determinant(M: Sequence[Sequence]) -> XUPoly | object:
    """sum over sigma of sgn(sigma) M[sigma(1)][1] ... M[sigma(n)][n], columns left to right."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("column determinant needs a square matrix")
    total = None
    for perm in permutations(range(n)):
        term = M[perm[0]][0]
        for c in range(1, n):
            term = term * M[perm[c]][c]
        term = term * _sign(perm)
        total = term if total is None else total + term
    return total


def gen_center_window(lam: Pyramid, m: int) -> range:
    """r with lambda_{n-m+2}+...+lambda_n < r + m <= lambda_{n-m+1}+...+lambda_n."""
    n = lam.n
    lo = sum(lam.part(s) for s in range(n - m + 2, n + 1))
    hi = lo + lam.part(n - m + 1)
    return range(lo - m + 1, hi - m + 1)


@dataclass
class PrincipalGenerator:
    m: int
    r: int
    phi: UEAElement  # central element of U(a)
    psi: UEAElement  # its image modulo the left ideal


def principal_generators(lam: Pyramid) -> list[PrincipalGenerator]:
    data = GradedData(lam, row_partition(lam.n))
    alg = UEA(data)
    cdet = column_determinant(principal_matrix(lam, alg))
    n = lam.n
    out = []
    for m in range(1, n + 1):
        coeffs = cdet.x_coeff(n - m)
        for r in gen_center_window(lam, m):
            phi = coeffs.get(r, alg.zero())
            out.append(PrincipalGenerator(m, r, phi, alg.reduce_mod_ideal(phi)))
    return out


def principal_linear_parts(lam: Pyramid) -> list[tuple[int, int, CentElt]]:
    """Linear part of the top Kazhdan layer of each Psi_m^(r).

    Writing rho = r - (lambda_{n-m+2} + ... + lambda_n) + m - 1 for the offset
    inside the window, the part is the diagonal sum
    E_{n,n-m+1}^(rho) + E_{n-1,n-m}^(rho + s_1) + ... + E_{m,1}^(rho + s_{n-m})
    with s_t = lambda_{[n-t+1,n]} - lambda_{[n-m+2-t, n-m+1]}.
    """
    n = lam.n
    cent_ok = GradedData(lam, row_partition(n)).cent.in_basis
    part_sum = lambda s, t: sum(lam.part(q) for q in range(s, t + 1))
    out = []
    for m in range(1, n + 1):
        base = part_sum(n - m + 2, n) - m + 1
        for r in gen_center_window(lam, m):
            rho = r - base
            terms = {}
            for t in range(0, n - m + 1):
                shift = part_sum(n - t + 1, n) - part_sum(n - m + 2 - t, n - m + 1)
                idx = (n - t, n - m + 1 - t, rho + shift)
                if cent_ok(idx):
                    terms[GenIndex(*idx)] = Fraction(1)
            out.append((m, r, CentElt(terms)))
    return out


# ----------------------------------------------------------------- minimal shape
def _require_minimal(lam: Pyramid, mu: Pyramid | None) -> Pyramid:
    if lam.n < 2:
        raise BadMu("minimal shape needs at least two rows in lambda")
    expected = minimal_partition(lam.n)
    if mu is not None and mu != expected:
        raise BadMu(f"mu must be {expected.parts}, got {mu.parts}")
    return expected


def minimal_b1(data: GradedData) -> list[CentElt]:
    lam, n = data.lam, data.lam.n
    ok = data.cent.in_basis
    out = [CentElt.basis(idx) for idx in data.cent.basis_indices
           if idx.i <= n - 2 and idx.j <= n - 1]
    for r in range(0, lam.part(n)):
        terms = {(n - 1, n - 1, r): 1, (n, n, r): 1}
        out.append(CentElt({GenIndex(*k): v for k, v in terms.items() if ok(k)}))
    return out


def minimal_b2(data: GradedData) -> list[GenIndex]:
    n = data.lam.n
    return [GenIndex(n, a, r) for a in range(1, n) for r in range(data.lam.part(a))]


def quadratic_terms(lam: Pyramid, alpha: int, r: int):
    """Index pairs (sign, first, second) of the quadratic part for E_{n alpha}^(r).

    Splits a + b = lambda_n - 1 + r run over all integers; pairs with an index
    outside S^e vanish and are skipped by the caller.
    """
    n = lam.n
    total = lam.part(n) - 1 + r
    out = []
    for a in range(0, total + 1):
        b = total - a
        out.append((1, (n - 1, alpha, a), (n, n, b)))
    for gamma in range(1, n - 1):
        for a in range(0, total + 1):
            b = total - a
            out.append((-1, (n - 1, gamma, a), (gamma, alpha, b)))
    return out


def minimal_correction(lam: Pyramid, alpha: int, r: int) -> bool:
    return r == 0 and lam.part(alpha) == lam.part(lam.n)


def minimal_weight2(alg: UEA, alpha: int, r: int) -> UEAElement:
    lam = alg.data.lam
    n = lam.n
    ok = alg.data.cent.in_basis
    x = alg.gen((n, alpha, r))
    for sign, first, second in quadratic_terms(lam, alpha, r):
        if ok(first) and ok(second):
            x = x + alg.gen(first) * alg.gen(second) * sign
    if minimal_correction(lam, alpha, r):
        x = x - alg.gen((n - 1, alpha, lam.part(n) - 1)) * lam.part(n)
    return x


@dataclass
class MinimalGenerators:
    data: GradedData
    alg: UEA
    weight1: list[UEAElement]
    weight2: list[tuple[GenIndex, UEAElement]]

    def all(self) -> list[UEAElement]:
        return list(self.weight1) + [x for _, x in self.weight2]


def minimal_generators(lam: Pyramid, mu: Pyramid | None = None) -> MinimalGenerators:
    mu = _require_minimal(lam, mu)
    data = GradedData(lam, mu)
    alg = UEA(data)
    w1 = [alg.from_cent(b) for b in minimal_b1(data)]
    w2 = [(idx, minimal_weight2(alg, idx.j, idx.r)) for idx in minimal_b2(data)]
    return MinimalGenerators(data, alg, w1, w2)


def minimal_dimension_formula(lam: Pyramid) -> tuple[int, int, int]:
    """(dim a(0), #weight 1, #weight 2) from the closed-form counts."""
    n = lam.n
    w1 = sum((2 * n - 2 - 2 * i) * lam.part(i) for i in range(1, n - 1)) + lam.part(n)
    w2 = sum(lam.part(i) for i in range(1, n))
    total = sum((2 * n - 1 - 2 * i) * lam.part(i) for i in range(1, n)) + lam.part(n)
    return total, w1, w2


# ------------------------------------------------------------------ validation
@dataclass
class GeneratingSetReport:
    expected: dict[int, int]
    histogram: dict[int, int]
    ranks: dict[int, int]
    in_kernel: bool
    invariant: list[bool] = field(default_factory=list)
    witnesses: list[str] = field(default_factory=list)

    @property
    def rank_deficit(self) -> int:
        return sum(max(0, self.expected.get(w, 0) - self.ranks.get(w, 0))
                   for w in self.expected)

    @property
    def passed(self) -> bool:
        return (self.histogram == self.expected and self.ranks == self.expected
                and self.in_kernel and all(self.invariant))

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "expected_profile": self.expected,
            "weight_histogram": self.histogram,
            "span_ranks": self.ranks,
            "rank_deficit": self.rank_deficit,
            "linear_parts_in_ker_phi": self.in_kernel,
            "invariant": self.invariant,
            "witnesses": self.witnesses,
        }


def check_linear_parts(data: GradedData, parts: Iterable[tuple[int, CentElt]]):
    """Histogram, per-weight ranks and kernel membership for (weight, linear part) pairs."""
    kernel = data.ker_phi_basis()
    expected: dict[int, int] = {}
    for _, w in kernel:
        expected[w] = expected.get(w, 0) + 1
    by_weight: dict[int, list[CentElt]] = {}
    for w, lin in parts:
        by_weight.setdefault(w, []).append(lin)
    basis = data.p_indices
    ranks, in_kernel = {}, True
    for w, lins in by_weight.items():
        rows = [[x.coeff(b) for b in basis] for x in lins]
        ranks[w] = linalg.rank(rows, len(basis))
        ker_rows = [[x.coeff(b) for b in basis] for x, kw in kernel if kw == w]
        if linalg.rank(ker_rows + rows, len(basis)) != len(ker_rows):
            in_kernel = False
    hist = {w: len(v) for w, v in by_weight.items()}
    return (dict(sorted(expected.items())), dict(sorted(hist.items())),
            dict(sorted(ranks.items())), in_kernel)


def validate_generating_set(data: GradedData, candidates: Sequence[UEAElement],
                            check_invariance: bool = True) -> GeneratingSetReport:
    parts = []
    invariant, witnesses = [], []
    for x in candidates:
        if check_invariance:
            res = x.alg.is_invariant(x)
            invariant.append(res.ok)
            if not res.ok:
                witnesses.append(f"{x}: [{res.witness}, x] = {res.residue} mod I")
        parts.append(gr_linear_part(x))
    expected, hist, ranks, in_kernel = check_linear_parts(data, parts)
    return GeneratingSetReport(expected, hist, ranks, in_kernel, invariant, witnesses)
