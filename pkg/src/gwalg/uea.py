"""PBW arithmetic in U(a) relative to the (lambda, mu) ordered basis.

Monomials are weakly increasing tuples of positions in ``GradedData.order``;
since p-indices come first, every PBW monomial factors as (p-part)(n-part),
which is what makes reduction modulo the left ideal a substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .centralizer import CentElt, GenIndex, GradedData


class ContextMismatch(ValueError):
    pass


class ZeroElement(ValueError):
    pass


Mono = tuple[int, ...]


def _accumulate(acc: dict, terms: Mapping, scale) -> None:
    for m, c in terms.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


class UEA:
    """U(a) with the PBW basis fixed by a ``GradedData`` ordering."""

    def __init__(self, data: GradedData):
        self.data = data
        self.order = data.order
        self.pos = data.position
        self.n_start = len(data.p_indices)
        self._mul_cache: dict[tuple[Mono, int], dict[Mono, Fraction]] = {}
        self._br_cache: dict[tuple[int, int], dict[int, Fraction]] = {}

    def __eq__(self, other):
        return isinstance(other, UEA) and other.data == self.data

    def __hash__(self):
        return hash(("UEA", self.data))

    # construction -----------------------------------------------------------
    def one(self) -> UEAElement:
        return UEAElement(self, {(): Fraction(1)})

    def zero(self) -> UEAElement:
        return UEAElement(self, {})

    def scalar(self, c) -> UEAElement:
        return UEAElement(self, {(): Fraction(c)})

    def gen(self, idx) -> UEAElement:
        idx = GenIndex(*idx)
        if idx not in self.pos:
            return self.zero()
        return UEAElement(self, {(self.pos[idx],): Fraction(1)})

    def from_cent(self, x: CentElt) -> UEAElement:
        return UEAElement(self, {(self.pos[idx],): c for idx, c in x})

    def word(self, indices: Sequence, coeff=1) -> UEAElement:
        """Product of basis elements in the given (not necessarily sorted) order."""
        out = self.scalar(coeff)
        for idx in indices:
            out = out * self.gen(idx)
        return out

    # straightening ------------------------------------------------------------
    def _bracket_pos(self, x: int, y: int) -> dict[int, Fraction]:
        key = (x, y)
        hit = self._br_cache.get(key)
        if hit is None:
            br = self.data.cent.bracket_indices(self.order[x], self.order[y])
            hit = {self.pos[idx]: c for idx, c in br}
            self._br_cache[key] = hit
        return hit

    def _mul_mono_letter(self, m: Mono, x: int) -> dict[Mono, Fraction]:
        if not m or m[-1] <= x:
            return {m + (x,): Fraction(1)}
        key = (m, x)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        head, y = m[:-1], m[-1]
        out: dict[Mono, Fraction] = {}
        # head y x = (head x) y + head [y, x]
        for s, c in self._mul_mono_letter(head, x).items():
            _accumulate(out, self._mul_mono_letter(s, y), c)
        for z, c in self._bracket_pos(y, x).items():
            _accumulate(out, self._mul_mono_letter(head, z), c)
        self._mul_cache[key] = out
        return out

    def _mul_terms(self, a: Mapping[Mono, Fraction], b: Mapping[Mono, Fraction]) -> dict[Mono, Fraction]:
        out: dict[Mono, Fraction] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                cur = {ma: ca * cb}
                for x in mb:
                    nxt: dict[Mono, Fraction] = {}
                    for s, c in cur.items():
                        _accumulate(nxt, self._mul_mono_letter(s, x), c)
                    cur = nxt
                _accumulate(out, cur, 1)
        return out

    # gradings -----------------------------------------------------------------
    def kazhdan(self, m: Mono) -> int:
        return sum(1 - self.data.deg[self.order[x]] for x in m)

    # ideal and invariants -------------------------------------------------------
    def reduce_mod_ideal(self, x: UEAElement) -> UEAElement:
        self._check(x)
        chi = self.data.chi_index
        out: dict[Mono, Fraction] = {}
        for m, c in x.terms.items():
            k = 0
            while k < len(m) and m[k] < self.n_start:
                k += 1
            scale = Fraction(1)
            for z in m[k:]:
                scale *= -chi(self.order[z])
                if not scale:
                    break
            if scale:
                _accumulate(out, {m[:k]: c}, scale)
        return UEAElement(self, out)

    def ad(self, n: CentElt | UEAElement, x: UEAElement) -> UEAElement:
        nn = n if isinstance(n, UEAElement) else self.from_cent(n)
        return nn * x - x * nn

    def is_invariant(self, x: UEAElement) -> InvarianceResult:
        for idx in self.data.n_indices:
            residue = self.reduce_mod_ideal(self.ad(CentElt.basis(idx), x))
            if residue:
                return InvarianceResult(False, idx, residue)
        return InvarianceResult(True)

    def _check(self, x: UEAElement) -> None:
        if x.alg is not self and x.alg != self:
            raise ContextMismatch("element belongs to a different (lambda, mu) context")


@dataclass
class InvarianceResult:
    ok: bool
    witness: GenIndex | None = None
    residue: UEAElement | None = None

    def __bool__(self) -> bool:
        return self.ok


class UEAElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: UEA, terms: Mapping[Mono, Fraction]):
        self.alg = alg
        self.terms: dict[Mono, Fraction] = {m: Fraction(c) for m, c in terms.items() if c}
        for m in self.terms:
            if any(a > b for a, b in zip(m, m[1:])):
                raise ValueError(f"monomial {m} is not in PBW order")

    @classmethod
    def _raw(cls, alg: UEA, terms: dict[Mono, Fraction]) -> UEAElement:
        obj = cls.__new__(cls)
        obj.alg = alg
        obj.terms = terms
        return obj

    def _coerce(self, other) -> UEAElement:
        if isinstance(other, UEAElement):
            if other.alg is not self.alg and other.alg != self.alg:
                raise ContextMismatch("elements from different (lambda, mu) contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other) -> UEAElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return UEAElement._raw(self.alg, out)

    __radd__ = __add__

    def __neg__(self) -> UEAElement:
        return UEAElement._raw(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> UEAElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> UEAElement:
        return (-self) + other

    def __mul__(self, other) -> UEAElement:
        if isinstance(other, (int, Fraction)):
            return UEAElement._raw(self.alg, {m: c * other for m, c in self.terms.items() if c * other})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UEAElement._raw(self.alg, self.alg._mul_terms(self.terms, other.terms))

    def __rmul__(self, other) -> UEAElement:
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        if isinstance(other, UEAElement):
            return self.alg == other.alg and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple[GenIndex, ...], Fraction]]:
        order = self.alg.order
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            yield tuple(order[x] for x in m), self.terms[m]

    def __len__(self) -> int:
        return len(self.terms)

    def kazhdan_degree(self) -> int:
        if not self.terms:
            raise ZeroElement("zero has no Kazhdan degree")
        return max(self.alg.kazhdan(m) for m in self.terms)

    def __str__(self) -> str:
        from .textio import format_uea
        return format_uea(self)

    def __repr__(self) -> str:
        return f"UEAElement({self})"


def multiply(x: UEAElement, y: UEAElement) -> UEAElement:
    return x * y


def ad_action(n: CentElt, x: UEAElement) -> UEAElement:
    return x.alg.ad(n, x)


def reduce_mod_ideal(x: UEAElement) -> UEAElement:
    return x.alg.reduce_mod_ideal(x)


def is_invariant(x: UEAElement) -> InvarianceResult:
    return x.alg.is_invariant(x)


def gr_linear_part(x: UEAElement) -> tuple[int, CentElt]:
    """Top Kazhdan degree and the single-factor part of that layer."""
    top = x.kazhdan_degree()
    alg = x.alg
    lin = {alg.order[m[0]]: c for m, c in x.terms.items()
           if len(m) == 1 and alg.kazhdan(m) == top}
    return top, CentElt(lin)


def commutator(x: UEAElement, y: UEAElement) -> UEAElement:
    return x * y - y * x


def span_rank(elts: Iterable[CentElt], basis: Sequence[GenIndex]) -> int:
    from . import linalg
    rows = [[e.coeff(b) for b in basis] for e in elts]
    return linalg.rank(rows, len(basis)) if rows else 0
