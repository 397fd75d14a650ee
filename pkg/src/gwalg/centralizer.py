"""The centralizer a = gl_N^e of a nilpotent of Jordan type lambda.

Basis elements are ``E[i,j,r]``; the grading by a second pyramid mu splits
``a`` into the positive part ``n`` (indices ``S_{lambda,mu}``) and the
non-positive part ``p``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np

from . import linalg
from .pyramids import Pyramid


class IndexNotInBasis(ValueError):
    pass


class MuSizeMismatch(ValueError):
    pass


class NotInP(ValueError):
    pass


class GenIndex(NamedTuple):
    i: int
    j: int
    r: int

    def __str__(self) -> str:
        return f"E[{self.i},{self.j},{self.r}]"


class CentElt:
    """Finite linear combination of basis symbols ``E[i,j,r]``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GenIndex, Fraction] | None = None):
        self.terms: dict[GenIndex, Fraction] = {}
        if terms:
            for idx, c in terms.items():
                if c:
                    self.terms[GenIndex(*idx)] = Fraction(c)

    @classmethod
    def basis(cls, idx: Iterable[int]) -> CentElt:
        return cls({GenIndex(*idx): Fraction(1)})

    def __iter__(self) -> Iterator[tuple[GenIndex, Fraction]]:
        return iter(self.terms.items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, idx) -> Fraction:
        return self.terms.get(GenIndex(*idx), Fraction(0))

    def __add__(self, other: CentElt) -> CentElt:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return CentElt(out)

    def __neg__(self) -> CentElt:
        return CentElt({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: CentElt) -> CentElt:
        return self + (-other)

    def __mul__(self, s) -> CentElt:
        return CentElt({k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, CentElt):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"CentElt({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(idx) if mag == 1 else f"{mag} {idx}"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])


class Centralizer:
    """The Lie algebra ``a`` for a fixed pyramid lambda."""

    def __init__(self, lam: Pyramid):
        self.lam = lam

    def __eq__(self, other):
        return isinstance(other, Centralizer) and other.lam == self.lam

    def __hash__(self):
        return hash(("Centralizer", self.lam))

    def in_basis(self, idx) -> bool:
        i, j, r = idx
        n = self.lam.n
        if not (1 <= i <= n and 1 <= j <= n):
            return False
        li, lj = self.lam.part(i), self.lam.part(j)
        return lj - min(li, lj) <= r < lj

    @cached_property
    def basis_indices(self) -> tuple[GenIndex, ...]:
        out = []
        for i in range(1, self.lam.n + 1):
            for j in range(1, self.lam.n + 1):
                lj = self.lam.part(j)
                lo = lj - min(self.lam.part(i), lj)
                out.extend(GenIndex(i, j, r) for r in range(lo, lj))
        return tuple(out)

    @property
    def dim(self) -> int:
        return len(self.basis_indices)

    def embed(self, idx) -> np.ndarray:
        """The N x N matrix sum of e_ab, row(a)=i, row(b)=j, col(b)-col(a)=r."""
        if not self.in_basis(idx):
            raise IndexNotInBasis(f"{tuple(idx)} is not in S^e for {self.lam.parts}")
        i, j, r = idx
        lam = self.lam
        m = np.zeros((lam.N, lam.N), dtype=np.int64)
        for ca in range(1, lam.part(i) + 1):
            cb = ca + r
            if 1 <= cb <= lam.part(j):
                m[lam.box(i, ca) - 1, lam.box(j, cb) - 1] = 1
        return m

    def embed_elt(self, x: CentElt) -> np.ndarray:
        m = np.zeros((self.lam.N, self.lam.N), dtype=object)
        m[:] = Fraction(0)
        for idx, c in x:
            m = m + c * self.embed(idx)
        return m

    @lru_cache(maxsize=None)
    def bracket_indices(self, x: GenIndex, y: GenIndex) -> CentElt:
        """[E_ij^(r), E_hl^(s)] = delta_hj E_il^(r+s) - delta_il E_hj^(r+s)."""
        (i, j, r), (h, l, s) = x, y
        out: dict[GenIndex, Fraction] = {}
        if h == j and self.in_basis((i, l, r + s)):
            key = GenIndex(i, l, r + s)
            out[key] = out.get(key, 0) + 1
        if i == l and self.in_basis((h, j, r + s)):
            key = GenIndex(h, j, r + s)
            out[key] = out.get(key, 0) - 1
        return CentElt(out)

    def bracket(self, x: CentElt, y: CentElt) -> CentElt:
        out: dict[GenIndex, Fraction] = {}
        for a, ca in x:
            for b, cb in y:
                for idx, c in self.bracket_indices(a, b):
                    out[idx] = out.get(idx, 0) + ca * cb * c
        return CentElt(out)

    @staticmethod
    def deg_lambda(idx) -> int:
        """Column-difference grading inherited from gl_N; equals r."""
        return idx[2]

    @cached_property
    def _gram0(self) -> dict[tuple[GenIndex, GenIndex], Fraction]:
        # ad-trace over g_0 = span{e_ab : col(a) = col(b)}, block diagonal in columns
        lam = self.lam
        g0 = [(a, b) for a in range(1, lam.N + 1) for b in range(1, lam.N + 1)
              if lam.col(a) == lam.col(b)]
        deg0 = [idx for idx in self.basis_indices if idx.r == 0]
        mats = {idx: self.embed(idx) for idx in deg0}
        gram = {}
        for x in deg0:
            for y in deg0:
                X, Y = mats[x], mats[y]
                tr = 0
                for a, b in g0:
                    E = np.zeros((lam.N, lam.N), dtype=np.int64)
                    E[a - 1, b - 1] = 1
                    inner = Y @ E - E @ Y
                    outer = X @ inner - inner @ X
                    tr += int(outer[a - 1, b - 1])
                val = Fraction(tr, 2 * lam.N)
                if val:
                    gram[(x, y)] = val
        return gram

    def form_indices(self, x: GenIndex, y: GenIndex) -> Fraction:
        return self._gram0.get((GenIndex(*x), GenIndex(*y)), Fraction(0))

    def form(self, x: CentElt, y: CentElt) -> Fraction:
        total = Fraction(0)
        for a, ca in x:
            if a.r:
                continue
            for b, cb in y:
                if b.r:
                    continue
                total += ca * cb * self.form_indices(a, b)
        return total

    def form_invariance_defects(self) -> list[tuple[GenIndex, GenIndex, GenIndex, Fraction, Fraction]]:
        """Basis triples where ([x,y]|z) != (x|[y,z])."""
        out = []
        basis = self.basis_indices
        for x in basis:
            for y in basis:
                xy = self.bracket_indices(x, y)
                for z in basis:
                    lhs = self.form(xy, CentElt.basis(z))
                    rhs = self.form(CentElt.basis(x), self.bracket_indices(y, z))
                    if lhs != rhs:
                        out.append((x, y, z, lhs, rhs))
        return out


def basis_indices(lam: Pyramid) -> tuple[GenIndex, ...]:
    return Centralizer(lam).basis_indices


def embed(lam: Pyramid, idx) -> np.ndarray:
    return Centralizer(lam).embed(idx)


def bilinear_form(lam: Pyramid, x: CentElt, y: CentElt) -> Fraction:
    return Centralizer(lam).form(x, y)


class GradedData:
    """Everything attached to a pair of pyramids (lambda, mu)."""

    def __init__(self, lam: Pyramid, mu: Pyramid):
        if mu.N != lam.n:
            raise MuSizeMismatch(
                f"mu must have {lam.n} boxes (rows of lambda), got {mu.N}")
        self.lam = lam
        self.mu = mu
        self.cent = Centralizer(lam)
        self.deg = {idx: mu.col(idx.j) - mu.col(idx.i) for idx in self.cent.basis_indices}
        # p-indices first, then n-indices, each lexicographic in (deg, i, j, r)
        self.order: tuple[GenIndex, ...] = tuple(
            sorted(self.cent.basis_indices, key=lambda x: (self.deg[x], x)))
        self.position = {idx: k for k, idx in enumerate(self.order)}
        self.n_indices = tuple(x for x in self.order if self.deg[x] > 0)
        self.p_indices = tuple(x for x in self.order if self.deg[x] <= 0)
        self.zero_indices = tuple(x for x in self.order if self.deg[x] == 0)
        self.n_set = frozenset(self.n_indices)
        self.chi_support = frozenset(
            GenIndex(i, i + 1, lam.part(i + 1) - 1)
            for i in range(1, lam.n) if mu.row(i) == mu.row(i + 1))
        self.e = CentElt({idx: 1 for idx in self.chi_support})

    def __eq__(self, other):
        return (isinstance(other, GradedData)
                and (other.lam, other.mu) == (self.lam, self.mu))

    def __hash__(self):
        return hash(("GradedData", self.lam, self.mu))

    def __repr__(self):
        return f"GradedData(lambda={self.lam.parts}, mu={self.mu.parts})"

    # gradings -------------------------------------------------------------
    def deg_of(self, x: CentElt) -> int | None:
        degs = {self.deg[idx] for idx, _ in x}
        return degs.pop() if len(degs) == 1 else None

    def weight(self, idx) -> int:
        """Conformal weight / Kazhdan degree 1 - deg_mu."""
        return 1 - self.deg[GenIndex(*idx)]

    @cached_property
    def h(self) -> CentElt:
        n = self.lam.n
        return CentElt({GenIndex(i, i, 0): n - self.mu.col(i) for i in range(1, n + 1)
                        if n - self.mu.col(i)})

    # character and projections ------------------------------------------
    def chi(self, x: CentElt) -> Fraction:
        """chi extended by zero outside its support (in particular on p)."""
        return sum((c for idx, c in x if idx in self.chi_support), Fraction(0))

    def chi_index(self, idx) -> int:
        return int(GenIndex(*idx) in self.chi_support)

    def pi_plus(self, x: CentElt) -> CentElt:
        return CentElt({idx: c for idx, c in x if idx in self.n_set})

    def pi_le(self, x: CentElt) -> CentElt:
        return CentElt({idx: c for idx, c in x if idx not in self.n_set})

    def in_p(self, x: CentElt) -> bool:
        return all(idx not in self.n_set for idx, _ in x)

    # coadjoint data ---------------------------------------------------------
    def coadjoint(self, x: CentElt, m: Mapping[GenIndex, Fraction]) -> dict[GenIndex, Fraction]:
        """(x . m)(y) = m([y, x]) for y in n, m extended by zero off n."""
        out = {}
        for y in self.n_indices:
            val = Fraction(0)
            for idx, c in self.cent.bracket(CentElt.basis(y), x):
                val += c * m.get(idx, 0)
            if val:
                out[y] = val
        return out

    @cached_property
    def chi_dual(self) -> dict[GenIndex, Fraction]:
        return {idx: Fraction(1) for idx in self.chi_support}

    def phi(self, a: CentElt) -> dict[GenIndex, Fraction]:
        """The map p -> n^*, a -> (a . chi) restricted to n."""
        if not self.in_p(a):
            raise NotInP(f"{a} is not in p")
        return self.coadjoint(a, self.chi_dual)

    def phi_matrix(self, cols: Iterable[GenIndex] | None = None) -> list[list[Fraction]]:
        cols = self.p_indices if cols is None else tuple(cols)
        images = [self.phi(CentElt.basis(c)) for c in cols]
        return [[img.get(y, Fraction(0)) for img in images] for y in self.n_indices]

    def phi_rank(self) -> int:
        return linalg.rank(self.phi_matrix(), len(self.p_indices))

    def ker_phi_basis(self) -> list[tuple[CentElt, int]]:
        """Homogeneous basis of ker(phi), as (element, conformal weight) pairs."""
        out = []
        for d in sorted({self.deg[x] for x in self.p_indices}, reverse=True):
            cols = [x for x in self.p_indices if self.deg[x] == d]
            rows = self.phi_matrix(cols)
            for v in linalg.nullspace(rows, len(cols)):
                out.append((CentElt(dict(zip(cols, v))), 1 - d))
        return out

    def ker_phi_profile(self) -> dict[int, int]:
        prof: dict[int, int] = {}
        for _, w in self.ker_phi_basis():
            prof[w] = prof.get(w, 0) + 1
        return dict(sorted(prof.items()))

    # trace correction ---------------------------------------------------------
    def trace_term(self, a: CentElt, b: CentElt) -> Fraction:
        """tr over n of (pi_+ ad a) o (pi_+ ad b)."""
        total = Fraction(0)
        br = self.cent.bracket
        for y in self.n_indices:
            inner = self.pi_plus(br(b, CentElt.basis(y)))
            if inner:
                total += self.pi_plus(br(a, inner)).coeff(y)
        return total

    @lru_cache(maxsize=None)
    def trace_term_indices(self, x: GenIndex, y: GenIndex) -> Fraction:
        return self.trace_term(CentElt.basis(x), CentElt.basis(y))


def graded_data(lam: Pyramid, mu: Pyramid) -> GradedData:
    return GradedData(lam, mu)
