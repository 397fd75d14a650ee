"""Lambda-bracket and normally ordered product calculus.

A vertex algebra here is freely generated by a finite list of generators with
prescribed pairwise lambda-brackets. Monomials are sorted tuples of letters
``(g, t)`` standing for ``d^t g`` (no divided powers) and are read right-nested,
``:l1 :l2 ... ln::``. Letters sort by ``(g, -t)``, so higher derivatives of a
generator come first.

Internally a state is a flat dict ``(mono, e) -> Fraction`` where ``e`` is the
power of the level k, and a lambda-polynomial is ``(n, mono, e) -> Fraction``
for the coefficient of ``lambda^n k^e mono``. The public wrappers ``VState``
and ``LambdaPoly`` expose Q[k] coefficients.

Formulas used (p = parity sign):
  quasi-commutativity   :a:bC:: = p :b:aC:: + :(int_{-d}^0 [a_l b] dl) C:
  quasi-associativity   ::aA:B: = :a:AB:: + :(int_0^d a)[A_l B]: + p :(int_0^d A)[a_l B]:
  sesquilinearity       [d^s a_l d^t b] = (-l)^s (l+d)^t [a_l b]
  left Wick             [a_l :bB:] = :[a_l b]B: + p :b[a_l B]: + int_0^l [[a_l b]_m B] dm
  right Wick            [:aA:_l B] = :(e^{d d_l} a)[A_l B]: + p :(e^{d d_l} A)[a_l B]:
                                     + p int_0^l [A_m [a_{l-m} B]] dm
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping

from .kpoly import KPoly


class ContextMismatch(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


Letter = tuple[int, int]
Mono = tuple[Letter, ...]
Lin = dict[tuple[Mono, int], Fraction]
LP = dict[tuple[int, Mono, int], Fraction]

HALF = Fraction(1, 2)


def _key(l: Letter) -> tuple[int, int]:
    return (l[0], -l[1])


def _acc(dst: dict, src: Mapping, scale=1, eshift: int = 0) -> None:
    for (m, e), c in src.items():
        key = (m, e + eshift)
        v = dst.get(key, 0) + c * scale
        if v:
            dst[key] = v
        else:
            dst.pop(key, None)


def _acc_lp(dst: dict, src: Mapping, scale=1, nshift: int = 0, eshift: int = 0) -> None:
    for (n, m, e), c in src.items():
        key = (n + nshift, m, e + eshift)
        v = dst.get(key, 0) + c * scale
        if v:
            dst[key] = v
        else:
            dst.pop(key, None)


def _add_at(dst: dict, n: int, lin: Mapping, scale=1, eshift: int = 0) -> None:
    for (m, e), c in lin.items():
        key = (n, m, e + eshift)
        v = dst.get(key, 0) + c * scale
        if v:
            dst[key] = v
        else:
            dst.pop(key, None)


def _by_power(lp: Mapping) -> dict[int, Lin]:
    out: dict[int, Lin] = {}
    for (n, m, e), c in lp.items():
        out.setdefault(n, {})[(m, e)] = c
    return out


@dataclass(frozen=True)
class VGen:
    """A free generator: ``kind`` is current, block, ghost or dual_ghost."""
    kind: str
    index: tuple
    parity: int
    weight: int
    symbol: str

    def __str__(self) -> str:
        i = ",".join(str(x) for x in self.index)
        return f"{self.symbol}[{i}]"


class VertexAlgebra:
    """Generators plus a bracket table; all calculus is memoized per instance.

    ``table[(g, h)]`` is the flat lambda-polynomial ``[g_lambda h]`` between
    underived generators; missing pairs are zero.
    """

    def __init__(self, gens: Iterable[VGen], table: Mapping[tuple[int, int], LP],
                 name: str = ""):
        self.gens: tuple[VGen, ...] = tuple(gens)
        self.table = {k: dict(v) for k, v in table.items() if v}
        self.name = name
        self.lookup = {(g.symbol, tuple(g.index)): i for i, g in enumerate(self.gens)}
        self.resolvers: dict[str, Callable[[tuple], "VState | None"]] = {}
        self._ins: dict = {}
        self._np: dict = {}
        self._br: dict = {}
        self._der: dict = {}

    def __repr__(self) -> str:
        return f"VertexAlgebra({self.name or len(self.gens)})"

    # letters and monomials ----------------------------------------------------
    def parity(self, m: Mono) -> int:
        return sum(self.gens[g].parity for g, _ in m) & 1

    def weight(self, m: Mono) -> int:
        return sum(self.gens[g].weight + t for g, t in m)

    def _sign(self, m1: Mono, m2: Mono) -> int:
        return -1 if self.parity(m1) and self.parity(m2) else 1

    # derivative -----------------------------------------------------------------
    def _deriv_mono(self, m: Mono) -> Lin:
        hit = self._der.get(m)
        if hit is not None:
            return hit
        out: Lin = {}
        for i, (g, t) in enumerate(m):
            # the bumped letter sorts before its old position, so only the prefix moves
            cur: Lin = {(((g, t + 1),) + m[i + 1:], 0): Fraction(1)}
            for l in reversed(m[:i]):
                cur = self._insert_lin(l, cur)
            _acc(out, cur)
        self._der[m] = out
        return out

    def deriv(self, x: Lin, times: int = 1) -> Lin:
        for _ in range(times):
            out: Lin = {}
            for (m, e), c in x.items():
                if m:
                    _acc(out, self._deriv_mono(m), c, e)
            x = out
        return x

    # normally ordered product ------------------------------------------------------
    def _insert(self, l: Letter, m: Mono) -> Lin:
        """:l m: for a letter l and canonical monomial m."""
        if not m:
            return {((l,), 0): Fraction(1)}
        b = m[0]
        kl, kb = _key(l), _key(b)
        if kl < kb or (l == b and not self.gens[l[0]].parity):
            return {((l,) + m, 0): Fraction(1)}
        key = (l, m)
        hit = self._ins.get(key)
        if hit is not None:
            return hit
        rest = m[1:]
        out: Lin = {}
        if l == b:
            # odd square: the two quasi-associativity corrections cancel
            c = self._int_minus_d(self._br_mono((l,), (l,)))
            _acc(out, self._np_lin_mono(c, rest), HALF)
        else:
            sign = -1 if self.gens[l[0]].parity and self.gens[b[0]].parity else 1
            for (mx, e), c in self._insert(l, rest).items():
                _acc(out, self._insert(b, mx), sign * c, e)
            c = self._int_minus_d(self._br_mono((l,), (b,)))
            _acc(out, self._np_lin_mono(c, rest))
        self._ins[key] = out
        return out

    def _insert_lin(self, l: Letter, x: Lin) -> Lin:
        out: Lin = {}
        for (m, e), c in x.items():
            _acc(out, self._insert(l, m), c, e)
        return out

    def _int_minus_d(self, lp: LP) -> Lin:
        """int_{-d}^0 of sum l^n c_n, i.e. sum (-1)^n d^{n+1} c_n / (n+1)."""
        out: Lin = {}
        for n, lin in _by_power(lp).items():
            _acc(out, self.deriv(lin, n + 1), Fraction((-1) ** n, n + 1))
        return out

    def _np_mono(self, a: Mono, b: Mono) -> Lin:
        if not a:
            return {(b, 0): Fraction(1)}
        if not b:
            return {(a, 0): Fraction(1)}
        if len(a) == 1:
            return self._insert(a[0], b)
        key = (a, b)
        hit = self._np.get(key)
        if hit is not None:
            return hit
        first, tail = a[0], a[1:]
        out = self._insert_lin(first, self._np_mono(tail, b))
        g, t = first
        for (n, m, e), c in self._br_mono(tail, b).items():
            _acc(out, self._insert((g, t + n + 1), m), c / (n + 1), e)
        sign = self._sign((first,), tail)
        tail_lin = {(tail, 0): Fraction(1)}
        for n, lin in _by_power(self._br_mono((first,), b)).items():
            _acc(out, self._np_lin(self.deriv(tail_lin, n + 1), lin), Fraction(sign, n + 1))
        self._np[key] = out
        return out

    def _np_lin_mono(self, x: Lin, b: Mono) -> Lin:
        out: Lin = {}
        for (m, e), c in x.items():
            _acc(out, self._np_mono(m, b), c, e)
        return out

    def _np_lin(self, x: Lin, y: Lin) -> Lin:
        out: Lin = {}
        for (mx, ex), cx in x.items():
            for (my, ey), cy in y.items():
                _acc(out, self._np_mono(mx, my), cx * cy, ex + ey)
        return out

    # lambda-bracket ---------------------------------------------------------------------
    def _br_letters(self, a: Letter, b: Letter) -> LP:
        (g, s), (h, t) = a, b
        base = self.table.get((g, h))
        if not base:
            return {}
        if s == 0 and t == 0:
            return base
        out: LP = {}
        for n, lin in _by_power(base).items():
            for j in range(t + 1):
                _add_at(out, n + t - j + s, self.deriv(lin, j), comb(t, j) * (-1) ** s)
        return out

    def _br_mono(self, a: Mono, b: Mono) -> LP:
        if not a or not b:
            return {}
        key = (a, b)
        hit = self._br.get(key)
        if hit is not None:
            return hit
        if len(a) == 1 and len(b) == 1:
            out = self._br_letters(a[0], b[0])
        elif len(a) == 1:
            out = self._left_wick(a, b)
        else:
            out = self._right_wick(a, b)
        self._br[key] = out
        return out

    def _left_wick(self, a: Mono, b: Mono) -> LP:
        first, rest = b[:1], b[1:]
        out: LP = {}
        ab = self._br_mono(a, first)
        for (n, m, e), c in ab.items():
            _add_at(out, n, self._np_mono(m, rest), c, e)
        sign = self._sign(a, first)
        for (n, m, e), c in self._br_mono(a, rest).items():
            _add_at(out, n, self._insert(first[0], m), sign * c, e)
        for (n, m, e), c in ab.items():
            for (q, m2, e2), c2 in self._br_mono(m, rest).items():
                key = (n + q + 1, m2, e + e2)
                v = out.get(key, 0) + c * c2 / (q + 1)
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    def _right_wick(self, a: Mono, b: Mono) -> LP:
        first, tail = a[0], a[1:]
        g, t = first
        sign = self._sign((first,), tail)
        out: LP = {}
        for (n, m, e), c in self._br_mono(tail, b).items():
            for j in range(n + 1):
                _add_at(out, n - j, self._insert((g, t + j), m), comb(n, j) * c, e)
        tail_lin = {(tail, 0): Fraction(1)}
        fb = self._br_mono((first,), b)
        for n, lin in _by_power(fb).items():
            for j in range(n + 1):
                _add_at(out, n - j, self._np_lin(self.deriv(tail_lin, j), lin), sign * comb(n, j))
        for (n, m, e), c in fb.items():
            for (q, m2, e2), c2 in self._br_mono(tail, m).items():
                coeff = Fraction(factorial(n) * factorial(q), factorial(n + q + 1))
                key = (n + q + 1, m2, e + e2)
                v = out.get(key, 0) + sign * c * c2 * coeff
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out

    def _br_lin(self, x: Lin, y: Lin) -> LP:
        out: LP = {}
        for (mx, ex), cx in x.items():
            for (my, ey), cy in y.items():
                _acc_lp(out, self._br_mono(mx, my), cx * cy, 0, ex + ey)
        return out

    def _br_mono_lin(self, x: Lin, m: Mono | None, y: Lin | None = None) -> LP:
        """[x_l m] for a monomial m, or [x_l y] when m is None."""
        return self._br_lin(x, {(m, 0): Fraction(1)} if m is not None else y)

    def skew_of(self, lp: LP, parity_sign: int) -> LP:
        """Given [b_l a] = sum l^n c_n return -p sum (-l-d)^n c_n."""
        out: LP = {}
        for n, lin in _by_power(lp).items():
            for j in range(n + 1):
                _add_at(out, n - j, self.deriv(lin, j),
                        -parity_sign * comb(n, j) * (-1) ** n)
        return out

    # public API -----------------------------------------------------------------------
    def state(self, terms: Lin) -> VState:
        return VState(self, terms)

    def one(self) -> VState:
        return VState(self, {((), 0): Fraction(1)})

    def zero(self) -> VState:
        return VState(self, {})

    def scalar(self, c) -> VState:
        return VState(self, {((), e): v for e, v in _kdict(c).items()})

    def gen(self, g: int, t: int = 0) -> VState:
        return VState(self, {(((g, t),), 0): Fraction(1)})

    def by_symbol(self, symbol: str, index) -> VState:
        index = tuple(index)
        g = self.lookup.get((symbol, index))
        if g is not None:
            return self.gen(g)
        res = self.resolvers.get(symbol)
        if res is not None:
            st = res(index)
            if st is not None:
                return st
        raise UnknownGenerator(f"{symbol}[{','.join(map(str, index))}] is not a generator here")

    def normal_product(self, x: VState, y: VState) -> VState:
        self._check(x)
        self._check(y)
        return VState(self, self._np_lin(x.terms, y.terms))

    def derivative(self, x: VState, times: int = 1) -> VState:
        self._check(x)
        return VState(self, self.deriv(x.terms, times))

    def lambda_bracket(self, x: VState, y: VState) -> LambdaPoly:
        self._check(x)
        self._check(y)
        return LambdaPoly(self, self._br_lin(x.terms, y.terms))

    def skew_symmetric_partner(self, x: VState, y: VState) -> LambdaPoly:
        """-(-1)^{p(x)p(y)} [y_{-l-d} x], which must equal [x_l y]."""
        px, py = x.parity(), y.parity()
        if px is None or py is None:
            raise ValueError("skew-symmetry needs parity-homogeneous states")
        lp = self._br_lin(y.terms, x.terms)
        return LambdaPoly(self, self.skew_of(lp, -1 if px and py else 1))

    def table_skew_defects(self) -> list[tuple[int, int]]:
        bad = []
        for g in range(len(self.gens)):
            for h in range(len(self.gens)):
                p = -1 if self.gens[g].parity and self.gens[h].parity else 1
                lhs = self.table.get((g, h), {})
                rhs = self.skew_of(self.table.get((h, g), {}), p)
                if lhs != rhs:
                    bad.append((g, h))
        return bad

    def _check(self, x) -> None:
        if x.alg is not self:
            raise ContextMismatch("states belong to different vertex algebras")


def _kdict(c) -> dict[int, Fraction]:
    if isinstance(c, KPoly):
        return c.as_dict()
    c = Fraction(c)
    return {0: c} if c else {}


class VState:
    """A state: Q[k]-linear combination of canonical monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: VertexAlgebra, terms: Mapping[tuple[Mono, int], Fraction]):
        self.alg = alg
        self.terms: Lin = {k: Fraction(v) for k, v in terms.items() if v}

    def _coerce(self, other) -> VState:
        if isinstance(other, VState):
            if other.alg is not self.alg:
                raise ContextMismatch("states belong to different vertex algebras")
            return other
        if isinstance(other, (int, Fraction, KPoly)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other) -> VState:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        _acc(out, other.terms)
        return VState(self.alg, out)

    __radd__ = __add__

    def __neg__(self) -> VState:
        return VState(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> VState:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> VState:
        return (-self) + other

    def __mul__(self, c) -> VState:
        """Scalar multiplication by a rational or a polynomial in k."""
        if not isinstance(c, (int, Fraction, KPoly)):
            return NotImplemented
        out: Lin = {}
        for e, v in _kdict(c).items():
            _acc(out, self.terms, v, e)
        return VState(self.alg, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, KPoly)):
            other = self.alg.scalar(other)
        if not isinstance(other, VState):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def monomials(self) -> dict[Mono, KPoly]:
        grouped: dict[Mono, dict[int, Fraction]] = {}
        for (m, e), c in self.terms.items():
            grouped.setdefault(m, {})[e] = c
        return {m: KPoly.from_dict(d) for m, d in grouped.items()}

    def coeff(self, mono: Mono) -> KPoly:
        return KPoly.from_dict({e: c for (m, e), c in self.terms.items() if m == mono})

    def conformal_weight(self) -> int | None:
        ws = {self.alg.weight(m) for m, _ in self.terms}
        return ws.pop() if len(ws) == 1 else None

    def parity(self) -> int | None:
        ps = {self.alg.parity(m) for m, _ in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def derivative(self, times: int = 1) -> VState:
        return self.alg.derivative(self, times)

    def specialize(self, k) -> VState:
        out: Lin = {}
        for (m, e), c in self.terms.items():
            _acc(out, {(m, 0): c}, Fraction(k) ** e)
        return VState(self.alg, out)

    def __str__(self) -> str:
        from .textio import format_state
        return format_state(self)

    def __repr__(self) -> str:
        return f"VState({self})"


class LambdaPoly:
    """Polynomial in lambda with state coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: VertexAlgebra, terms: Mapping[tuple[int, Mono, int], Fraction]):
        self.alg = alg
        self.terms: LP = {k: Fraction(v) for k, v in terms.items() if v}

    @classmethod
    def from_coefficients(cls, alg: VertexAlgebra, coeffs: Mapping[int, VState]) -> LambdaPoly:
        out: LP = {}
        for n, st in coeffs.items():
            _add_at(out, n, st.terms)
        return cls(alg, out)

    def coefficient(self, n: int) -> VState:
        return VState(self.alg, {(m, e): c for (q, m, e), c in self.terms.items() if q == n})

    def coefficients(self) -> dict[int, VState]:
        return {n: VState(self.alg, lin) for n, lin in sorted(_by_power(self.terms).items())}

    def at_zero(self) -> VState:
        return self.coefficient(0)

    @property
    def degree(self) -> int:
        return max((n for n, _, _ in self.terms), default=-1)

    def __add__(self, other: LambdaPoly) -> LambdaPoly:
        out = dict(self.terms)
        _acc_lp(out, other.terms)
        return LambdaPoly(self.alg, out)

    def __neg__(self) -> LambdaPoly:
        return LambdaPoly(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: LambdaPoly) -> LambdaPoly:
        return self + (-other)

    def __mul__(self, c) -> LambdaPoly:
        out: LP = {}
        for e, v in _kdict(c).items():
            _acc_lp(out, self.terms, v, 0, e)
        return LambdaPoly(self.alg, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        from .textio import format_lambda
        return format_lambda(self)

    def __repr__(self) -> str:
        return f"LambdaPoly({self})"


def d_plus_2lambda(x: VState) -> LambdaPoly:
    """(d + 2 lambda) x, the shape of a primary field of weight 2 bracket."""
    return LambdaPoly.from_coefficients(x.alg, {0: x.derivative(), 1: x * 2})


def normal_product(x: VState, y: VState) -> VState:
    return x.alg.normal_product(x, y)


def derivative(x: VState, times: int = 1) -> VState:
    return x.alg.derivative(x, times)


def lambda_bracket(x: VState, y: VState) -> LambdaPoly:
    return x.alg.lambda_bracket(x, y)


def conformal_weight(x: VState) -> int | None:
    return x.conformal_weight()


def product(*states: VState) -> VState:
    """Right-nested normal product :s1 :s2 ... sn::."""
    if not states:
        raise ValueError("empty product")
    out = states[-1]
    for s in reversed(states[:-1]):
        out = s.alg.normal_product(s, out)
    return out


def jacobi_defect(x: VState, y: VState, z: VState) -> dict[tuple[int, int, Mono, int], Fraction]:
    """[x_l [y_m z]] - p(x,y) [y_m [x_l z]] - [[x_l y]_{l+m} z] as (n_l, n_m, mono, e) terms."""
    alg = x.alg
    sign = -1 if x.parity() and y.parity() else 1
    out: dict = {}

    def add(key, v):
        v = out.get(key, 0) + v
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    for (q, m, e), c in alg._br_lin(y.terms, z.terms).items():
        for (n, m2, e2), c2 in alg._br_mono_lin(x.terms, m).items():
            add((n, q, m2, e + e2), c * c2)
    for (q, m, e), c in alg._br_lin(x.terms, z.terms).items():
        for (n, m2, e2), c2 in alg._br_mono_lin(y.terms, m).items():
            add((q, n, m2, e + e2), -sign * c * c2)
    for (n, m, e), c in alg._br_lin(x.terms, y.terms).items():
        for (q, m2, e2), c2 in alg._br_mono_lin({(m, 0): Fraction(1)}, None, z.terms).items():
            for j in range(q + 1):
                add((n + j, q - j, m2, e + e2), -c * c2 * comb(q, j))
    return out
