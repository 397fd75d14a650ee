"""BRST complexes for the generalized affine W-algebra W^k(lambda, mu).

The full complex is V^k(a) tensored with free fermions on n + n^*; the
reduced complex is generated by building blocks J_a (a in p) and the
ghosts phi^m. Symbols in the text format: ``A`` plain current, ``J`` building
block (in the full complex it expands to its defining expression),
``Phi`` for phi_n and ``Phi*`` for phi^m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import sympy

from .centralizer import CentElt, GenIndex, GradedData
from .finite_w import (BadMu, _require_minimal, check_linear_parts, minimal_b1,
                       minimal_b2, minimal_correction, quadratic_terms)
from .kpoly import KPoly
from .pyramids import Pyramid
from .vertex import LP, LambdaPoly, Lin, VertexAlgebra, VGen, VState, _acc, product


class NotInReducedComplex(ValueError):
    pass


class NotClosed(ValueError):
    def __init__(self, candidate: VState, residue: VState, name: str = ""):
        self.candidate = candidate
        self.residue = residue
        self.name = name
        super().__init__(f"{name or candidate} is not closed: Q = {residue}")


def _one_term(g: int, c=1, n: int = 0, e: int = 0) -> tuple:
    return (n, ((g, 0),), e), Fraction(c)


class ComplexContext:
    """Full and reduced complexes for a fixed (lambda, mu)."""

    def __init__(self, data: GradedData):
        self.data = data
        self.cent = data.cent
        self._build_full()
        self._build_reduced()
        self._qred: dict = {}
        self._embed: dict = {}

    # construction --------------------------------------------------------------
    def _sorted(self, indices, weight):
        return sorted(indices, key=lambda x: (weight(x), x))

    def _build_full(self):
        data, cent = self.data, self.cent
        gens: list[VGen] = []
        self.f_dual: dict[GenIndex, int] = {}
        self.f_ghost: dict[GenIndex, int] = {}
        self.f_cur: dict[GenIndex, int] = {}
        for idx in self._sorted(data.n_indices, lambda x: data.deg[x]):
            self.f_dual[idx] = len(gens)
            gens.append(VGen("dual_ghost", tuple(idx), 1, data.deg[idx], "Phi*"))
        for idx in self._sorted(data.n_indices, data.weight):
            self.f_ghost[idx] = len(gens)
            gens.append(VGen("ghost", tuple(idx), 1, data.weight(idx), "Phi"))
        for idx in self._sorted(cent.basis_indices, data.weight):
            self.f_cur[idx] = len(gens)
            gens.append(VGen("current", tuple(idx), 0, data.weight(idx), "A"))
        table: dict[tuple[int, int], LP] = {}
        for a, ga in self.f_cur.items():
            for b, gb in self.f_cur.items():
                entry = dict(_one_term(self.f_cur[idx], c)
                             for idx, c in cent.bracket_indices(a, b))
                form = cent.form_indices(a, b)
                if form:
                    entry[(1, (), 1)] = form
                if entry:
                    table[(ga, gb)] = entry
        for idx in data.n_indices:
            table[(self.f_ghost[idx], self.f_dual[idx])] = {(0, (), 0): Fraction(1)}
            table[(self.f_dual[idx], self.f_ghost[idx])] = {(0, (), 0): Fraction(1)}
        self.full = VertexAlgebra(gens, table, name=f"C({data.lam},{data.mu})")
        self.full.resolvers["J"] = lambda idx: (
            self.building_block(CentElt.basis(idx)) if self.cent.in_basis(idx) else None)

    def _build_reduced(self):
        data, cent = self.data, self.cent
        gens: list[VGen] = []
        self.r_dual: dict[GenIndex, int] = {}
        self.r_J: dict[GenIndex, int] = {}
        for idx in self._sorted(data.n_indices, lambda x: data.deg[x]):
            self.r_dual[idx] = len(gens)
            gens.append(VGen("dual_ghost", tuple(idx), 1, data.deg[idx], "Phi*"))
        for idx in self._sorted(data.p_indices, data.weight):
            self.r_J[idx] = len(gens)
            gens.append(VGen("block", tuple(idx), 0, data.weight(idx), "J"))
        table: dict[tuple[int, int], LP] = {}
        for a, ga in self.r_J.items():
            for b, gb in self.r_J.items():
                entry = dict(_one_term(self.r_J[idx], c)
                             for idx, c in cent.bracket_indices(a, b))
                form = cent.form_indices(a, b)
                tau = data.trace_term_indices(a, b)
                if form:
                    entry[(1, (), 1)] = form
                if tau:
                    entry[(1, (), 0)] = tau
                if entry:
                    table[(ga, gb)] = entry
            for m, gm in self.r_dual.items():
                image = data.coadjoint(CentElt.basis(a), {m: Fraction(1)})
                if image:
                    table[(ga, gm)] = dict(_one_term(self.r_dual[y], c) for y, c in image.items())
                    table[(gm, ga)] = dict(_one_term(self.r_dual[y], -c) for y, c in image.items())
        self.reduced = VertexAlgebra(gens, table, name=f"C~({data.lam},{data.mu})")

    # element helpers ---------------------------------------------------------------
    def current(self, a: CentElt) -> VState:
        return self._lin(self.full, {self.f_cur[idx]: c for idx, c in a})

    def ghost(self, x: CentElt) -> VState:
        """phi_x := phi_{pi_+(x)}."""
        return self._lin(self.full, {self.f_ghost[idx]: c for idx, c in self.data.pi_plus(x)})

    def dual(self, m: Mapping[GenIndex, Fraction], reduced: bool = False) -> VState:
        table = self.r_dual if reduced else self.f_dual
        return self._lin(self.reduced if reduced else self.full,
                         {table[idx]: c for idx, c in m.items()})

    def J(self, a: CentElt) -> VState:
        """Reduced-complex building block for a in p."""
        if not self.data.in_p(a):
            raise NotInReducedComplex(f"J_a needs a in p, got {a}")
        return self._lin(self.reduced, {self.r_J[idx]: c for idx, c in a})

    @staticmethod
    def _lin(alg: VertexAlgebra, coeffs: Mapping[int, Fraction]) -> VState:
        return VState(alg, {(((g, 0),), 0): Fraction(c) for g, c in coeffs.items()})

    def _E(self, idx) -> CentElt:
        return CentElt.basis(idx)

    # the element d -------------------------------------------------------------------
    @cached_property
    def d(self) -> VState:
        full, data = self.full, self.data
        total = full.zero()
        for I in data.n_indices:
            total += full.normal_product(self.dual({I: 1}), self.current(self._E(I)))
        total += self.dual(data.chi_dual)
        for I in data.n_indices:
            for I2 in data.n_indices:
                br = self.cent.bracket_indices(I2, I)
                if data.pi_plus(br):
                    total += product(self.dual({I: 1}), self.dual({I2: 1}),
                                     self.ghost(br)) * Fraction(1, 2)
        return total

    def apply_Q_full(self, x: VState) -> VState:
        return self.full.lambda_bracket(self.d, x).at_zero()

    def building_block(self, a: CentElt) -> VState:
        full = self.full
        out = self.current(a)
        for I in self.data.n_indices:
            gh = self.ghost(self.cent.bracket(self._E(I), a))
            if gh:
                out += full.normal_product(self.dual({I: 1}), gh)
        return out

    # closed-form images, used as oracles for the bracket engine ------------------------------
    def _form_plus_trace(self, x: CentElt, a: CentElt) -> KPoly:
        return KPoly((self.data.trace_term(x, a), self.cent.form(x, a)))

    def expected_Q_current(self, a: CentElt) -> VState:
        full = self.full
        out = full.zero()
        for I in self.data.n_indices:
            out += full.normal_product(self.dual({I: 1}),
                                       self.current(self.cent.bracket(self._E(I), a)))
            f = self.cent.form(a, self._E(I))
            if f:
                out += self.dual({I: 1}).derivative() * (KPoly.k() * f)
        return out

    def expected_Q_ghost(self, n: GenIndex) -> VState:
        full, data = self.full, self.data
        out = self.current(self._E(n)) + data.chi_index(n)
        for I in data.n_indices:
            gh = self.ghost(self.cent.bracket(self._E(I), self._E(n)))
            if gh:
                out += full.normal_product(self.dual({I: 1}), gh)
        return out

    def expected_Q_dual(self, m: GenIndex, reduced: bool = False) -> VState:
        alg = self.reduced if reduced else self.full
        out = alg.zero()
        for I in self.data.n_indices:
            image = self.data.coadjoint(self._E(I), {m: Fraction(1)})
            if image:
                out += alg.normal_product(self.dual({I: 1}, reduced),
                                          self.dual(image, reduced)) * Fraction(1, 2)
        return out

    def expected_d_block(self, a: CentElt) -> LambdaPoly:
        """Sum :phi^I J_{pi<=[E_I,a]}: - phi^{a.chi} + (lambda+d) sum (k(E_I|a)+tau) phi^I."""
        full, data = self.full, self.data
        head = full.zero()
        tail = full.zero()
        for I in data.n_indices:
            low = data.pi_le(self.cent.bracket(self._E(I), a))
            if low:
                head += full.normal_product(self.dual({I: 1}), self.building_block(low))
            coeff = self._form_plus_trace(self._E(I), a)
            if coeff:
                tail += self.dual({I: 1}) * coeff
        head -= self.dual(data.coadjoint(a, data.chi_dual))
        return LambdaPoly.from_coefficients(full, {0: head + tail.derivative(), 1: tail})

    # reduced differential ---------------------------------------------------------------
    def _q_generator(self, g: int) -> Lin:
        red, data = self.reduced, self.data
        gen = red.gens[g]
        idx = GenIndex(*gen.index)
        if gen.kind == "dual_ghost":
            return self.expected_Q_dual(idx, reduced=True).terms
        a = self._E(idx)
        out = red.zero()
        tail = red.zero()
        for I in data.n_indices:
            low = data.pi_le(self.cent.bracket(self._E(I), a))
            if low:
                out += red.normal_product(self.dual({I: 1}, True), self.J(low))
            coeff = self._form_plus_trace(self._E(I), a)
            if coeff:
                tail += self.dual({I: 1}, True) * coeff
        out -= self.dual(data.coadjoint(a, data.chi_dual), True)
        out += tail.derivative()
        return out.terms

    def _q_mono(self, m) -> Lin:
        if not m:
            return {}
        hit = self._qred.get(m)
        if hit is not None:
            return hit
        red = self.reduced
        (g, t), rest = m[0], m[1:]
        head = red.deriv(self._q_generator(g), t)
        out = red._np_lin_mono(head, rest)
        if rest:
            sign = -1 if red.gens[g].parity else 1
            _acc(out, red._insert_lin((g, t), self._q_mono(rest)), sign)
        self._qred[m] = out
        return out

    def apply_Q_reduced(self, x: VState) -> VState:
        if x.alg is not self.reduced:
            raise NotInReducedComplex("state does not belong to the reduced complex")
        out: Lin = {}
        for (m, e), c in x.terms.items():
            _acc(out, self._q_mono(m), c, e)
        return VState(self.reduced, out)

    # reduced -> full -----------------------------------------------------------------------
    def _embed_mono(self, m) -> VState:
        hit = self._embed.get(m)
        if hit is not None:
            return hit
        full = self.full
        if not m:
            out = full.one()
        else:
            (g, t), rest = m[0], m[1:]
            gen = self.reduced.gens[g]
            idx = GenIndex(*gen.index)
            if gen.kind == "dual_ghost":
                head = self.dual({idx: 1})
            else:
                head = self.building_block(self._E(idx))
            head = head.derivative(t) if t else head
            out = full.normal_product(head, self._embed_mono(rest)) if rest else head
        self._embed[m] = out
        return out

    def embed(self, x: VState) -> VState:
        if x.alg is not self.reduced:
            raise NotInReducedComplex("state does not belong to the reduced complex")
        out: Lin = {}
        for (m, e), c in x.terms.items():
            _acc(out, self._embed_mono(m).terms, c, e)
        return VState(self.full, out)

    def embed_lambda(self, p: LambdaPoly) -> LambdaPoly:
        return LambdaPoly.from_coefficients(
            self.full, {n: self.embed(st) for n, st in p.coefficients().items()})


def build_context(lam: Pyramid, mu: Pyramid) -> ComplexContext:
    return ComplexContext(GradedData(lam, mu))


def apply_Q_full(ctx: ComplexContext, x: VState) -> VState:
    return ctx.apply_Q_full(x)


def apply_Q_reduced(ctx: ComplexContext, x: VState) -> VState:
    return ctx.apply_Q_reduced(x)


def building_block(ctx: ComplexContext, a: CentElt) -> VState:
    return ctx.building_block(a)


# --------------------------------------------------------------- generator families
def minimal_affine_generators(ctx: ComplexContext) -> list[tuple[str, VState]]:
    data = ctx.data
    lam = data.lam
    _require_minimal(lam, data.mu)
    n = lam.n
    ok = data.cent.in_basis
    red = ctx.reduced
    out = []
    for b in minimal_b1(data):
        out.append((f"J({b})", ctx.J(b)))
    for idx in minimal_b2(data):
        alpha, r = idx.j, idx.r
        g = ctx.J(CentElt.basis(idx))
        for sign, first, second in quadratic_terms(lam, alpha, r):
            if ok(first) and ok(second):
                g += red.normal_product(ctx.J(CentElt.basis(first)),
                                        ctx.J(CentElt.basis(second))) * sign
        if minimal_correction(lam, alpha, r):
            coeff = KPoly((lam.part(n), 1))
            g -= ctx.J(CentElt.basis((n - 1, alpha, lam.part(n) - 1))).derivative() * coeff
        out.append((f"G[{idx.i},{idx.j},{idx.r}]", g))
    return out


def linear_part(ctx: ComplexContext, x: VState, k0: Fraction = Fraction(7919, 13)) -> CentElt:
    """Derivative-free single-J terms; k-dependent coefficients are evaluated at k0."""
    terms = {}
    for m, poly in x.monomials().items():
        if len(m) == 1 and m[0][1] == 0:
            gen = ctx.reduced.gens[m[0][0]]
            if gen.kind == "block":
                terms[GenIndex(*gen.index)] = poly(k0)
    return CentElt(terms)


@dataclass
class AffineReport:
    expected: dict[int, int]
    histogram: dict[int, int]
    ranks: dict[int, int]
    in_kernel: bool
    closed: list[bool] = field(default_factory=list)

    @property
    def rank_deficit(self) -> int:
        return sum(max(0, self.expected.get(w, 0) - self.ranks.get(w, 0)) for w in self.expected)

    @property
    def passed(self) -> bool:
        return (self.histogram == self.expected and self.ranks == self.expected
                and self.in_kernel and all(self.closed))

    def as_dict(self) -> dict:
        return {"passed": self.passed, "expected_profile": self.expected,
                "weight_histogram": self.histogram, "span_ranks": self.ranks,
                "rank_deficit": self.rank_deficit, "linear_parts_in_ker_phi": self.in_kernel,
                "closed": self.closed}


def validate_affine_generating_set(ctx: ComplexContext,
                                   candidates: Sequence[VState | tuple[str, VState]]) -> AffineReport:
    parts = []
    closed = []
    for item in candidates:
        name, x = item if isinstance(item, tuple) else ("", item)
        residue = ctx.apply_Q_reduced(x)
        if residue:
            raise NotClosed(x, residue, name)
        closed.append(True)
        w = x.conformal_weight()
        if w is None:
            raise ValueError(f"candidate {name or x} is not homogeneous")
        parts.append((w, linear_part(ctx, x)))
    expected, hist, ranks, in_kernel = check_linear_parts(ctx.data, parts)
    return AffineReport(expected, hist, ranks, in_kernel, closed)


# ------------------------------------------------------------ conformal vectors
@dataclass
class ConformalSearchResult:
    solvable: bool
    specializations: list[Fraction]
    solution: dict[str, object] | None = None
    certificate: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"solvable": self.solvable,
                "specializations": [str(k) for k in self.specializations],
                "solution": {k: str(v) for k, v in (self.solution or {}).items()},
                "certificate": self.certificate}


DEFAULT_SPECIALIZATIONS = tuple(Fraction(x) for x in ("3/7", "11/5", "-17/3", "29", "-41/11"))


def conformal_vector_search(ansatz: Sequence[VState],
                            specializations: Sequence[Fraction] = DEFAULT_SPECIALIZATIONS,
                            ) -> ConformalSearchResult:
    """Look for a nonzero w = sum c_i b_i with [w_l w] = (d + 2l) w + c l^3.

    For each value of k the quadratic system in the c_i and c is decided with a
    Groebner basis: adding 1 - t c_i and reaching {1} rules out solutions with
    c_i != 0. No nonzero solution at any specialization certifies that none
    exists for generic k.
    """
    if not ansatz:
        return ConformalSearchResult(False, list(specializations), None,
                                     ["empty ansatz: only w = 0"])
    alg = ansatz[0].alg
    m = len(ansatz)
    cs = sympy.symbols(f"c0:{m}")
    central, t = sympy.symbols("c t")
    brackets = {(i, j): alg.lambda_bracket(ansatz[i], ansatz[j]).terms
                for i in range(m) for j in range(m)}
    linear = [alg.derivative(b).terms for b in ansatz]
    doubled = [b.terms for b in ansatz]

    def equations(k0: Fraction) -> list:
        k0 = sympy.Rational(k0.numerator, k0.denominator)
        eq: dict = {}

        def add(key, expr):
            eq[key] = eq.get(key, 0) + expr

        for (i, j), lp in brackets.items():
            for (n, mono, e), c in lp.items():
                add((n, mono), sympy.Rational(c.numerator, c.denominator) * k0 ** e * cs[i] * cs[j])
        for i in range(m):
            for (mono, e), c in linear[i].items():
                add((0, mono), -sympy.Rational(c.numerator, c.denominator) * k0 ** e * cs[i])
            for (mono, e), c in doubled[i].items():
                add((1, mono), -2 * sympy.Rational(c.numerator, c.denominator) * k0 ** e * cs[i])
        add((3, ()), -central)
        return [sympy.expand(v) for v in eq.values() if sympy.expand(v) != 0]

    certificate = []
    for k0 in specializations:
        eqs = equations(k0)
        nonzero = []
        for i in range(m):
            gb = sympy.groebner(eqs + [1 - t * cs[i]], *cs, central, t, order="grevlex")
            if list(gb.exprs) != [1]:
                nonzero.append(i)
        if nonzero:
            sols = sympy.solve(eqs + [cs[nonzero[0]] - 1], [*cs, central], dict=True)
            if not sols:
                sols = sympy.solve(eqs, [*cs, central], dict=True)
                sols = [s for s in sols if any(s.get(ci, ci) != 0 for ci in cs)]
            sol = sols[0] if sols else {}
            named = {str(key): val for key, val in sol.items()}
            return ConformalSearchResult(True, [k0], named, certificate)
        certificate.append(f"k={k0}: Groebner basis of the system with 1 - t*c_i is {{1}} "
                           f"for every i in 0..{m - 1}")
    return ConformalSearchResult(False, list(specializations), None, certificate)
