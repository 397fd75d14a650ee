"""Text forms for centralizer, enveloping-algebra and vertex-algebra elements.

UEA elements:     ``E[4,1,0] + E[3,1,0] E[4,4,1] - 3/4 E[1,1,0]``
Vertex states:    ``J[4,3,0] + J[3,3,0] J[4,4,1] - (k+2) D^1 J[3,3,1]``
                  with ``:( ... ):`` grouping and ``Phi*``, ``Phi``, ``A`` symbols.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .uea import UEA, UEAElement
    from .vertex import VertexAlgebra, VState, LambdaPoly


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"""
    \s*(?:
      (?P<sym>Phi\*|Phi|[EJA])\[\s*(?P<i>-?\d+)\s*,\s*(?P<j>-?\d+)\s*,\s*(?P<r>-?\d+)\s*\]
    | (?P<deriv>D\^(?P<t>\d+))
    | (?P<num>\d+(?:/\d+)?)
    | (?P<k>k)
    | (?P<op>:\(|\):|[-+*/^()])
    )""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, object]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            line = text.count("\n", 0, pos) + 1
            raise ParseError(f"line {line}: unexpected input near {rest[:20]!r}")
        pos = m.end()
        if m.group("sym"):
            out.append(("sym", (m.group("sym"), int(m.group("i")), int(m.group("j")), int(m.group("r")))))
        elif m.group("deriv"):
            out.append(("deriv", int(m.group("t"))))
        elif m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        elif m.group("k"):
            out.append(("k", None))
        else:
            out.append(("op", m.group("op")))
    return out


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _join_terms(terms: list[tuple[bool, str]]) -> str:
    """terms: (negative, body-with-magnitude)."""
    if not terms:
        return "0"
    neg, body = terms[0]
    pieces = [("-" if neg else "") + body]
    for neg, body in terms[1:]:
        pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


# --------------------------------------------------------------------------- UEA
def format_uea(x: UEAElement) -> str:
    terms = []
    for mono, c in x:
        word = " ".join(str(idx) for idx in mono)
        mag = abs(c)
        if not word:
            body = format_fraction(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{format_fraction(mag)} {word}"
        terms.append((c < 0, body))
    return _join_terms(terms)


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def at_end(self):
        return self.i >= len(self.toks)


def parse_uea(text: str, alg: UEA) -> UEAElement:
    """Sum of signed terms ``[coeff] E[..] E[..] ...``; factors multiply left to right."""
    p = _Parser(_tokenize(text))
    if p.at_end():
        raise ParseError("empty element")
    total = alg.zero()
    first = True
    while not p.at_end():
        sign = 1
        kind, val = p.peek()
        if kind == "op" and val in "+-":
            p.take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}")
        first = False
        coeff, explicit = Fraction(1), False
        if p.peek()[0] == "num":
            coeff, explicit = p.take()[1], True
            if p.peek() == ("op", "*"):
                p.take()
        term = alg.scalar(sign * coeff)
        nfactors = 0
        while p.peek()[0] == "sym":
            sym, i, j, r = p.take()[1]
            if sym != "E":
                raise ParseError(f"symbol {sym} not allowed in an enveloping-algebra element")
            if not alg.data.cent.in_basis((i, j, r)):
                raise ParseError(
                    f"E[{i},{j},{r}] is not a basis element for lambda={alg.data.lam.parts}")
            term = term * alg.gen((i, j, r))
            nfactors += 1
        if not nfactors and not explicit:
            raise ParseError(f"expected a term, got {p.peek()[1]!r}")
        total = total + term
    return total


# ------------------------------------------------------------------------ vertex
def format_letter(alg: VertexAlgebra, letter) -> str:
    g, t = letter
    body = str(alg.gens[g])
    return f"D^{t} {body}" if t else body


def format_mono(alg: VertexAlgebra, mono) -> str:
    return " ".join(format_letter(alg, l) for l in mono)


def _coeff_body(poly, word: str) -> tuple[bool, str]:
    """(negative, text) for poly * word with the sign pulled out."""
    neg = poly.leading_negative()
    mag = -poly if neg else poly
    if mag.is_const():
        c = mag.const_value()
        if not word:
            return neg, format_fraction(c)
        return neg, word if c == 1 else f"{format_fraction(c)} {word}"
    text = str(mag)
    if len(mag.as_dict()) == 1 and "/" not in text:
        coeff = text
    else:
        coeff = f"({text})"
    return neg, f"{coeff} {word}" if word else f"({text})"


def _mono_sort_key(alg, mono):
    return (len(mono), alg.weight(mono), tuple((g, -t) for g, t in mono))


def format_state(x: VState) -> str:
    alg = x.alg
    monos = x.monomials()
    terms = [_coeff_body(monos[m], format_mono(alg, m))
             for m in sorted(monos, key=lambda m: _mono_sort_key(alg, m))]
    return _join_terms(terms)


def format_lambda(p: LambdaPoly) -> str:
    coeffs = p.coefficients()
    if not coeffs:
        return "0"
    parts = []
    for n, st in coeffs.items():
        body = format_state(st)
        if n == 0:
            parts.append(body)
        else:
            lam = "lambda" if n == 1 else f"lambda^{n}"
            parts.append(f"{lam} ({body})")
    return " + ".join(parts)


def _parse_kpoly_monomial(p: _Parser):
    """[num] [*] [k[^e]] [/ num]; returns (coefficient, exponent) or None."""
    from .kpoly import KPoly
    coeff, exp, seen = Fraction(1), 0, False
    if p.peek()[0] == "num":
        coeff, seen = p.take()[1], True
        if p.peek() == ("op", "*") and p.toks[p.i + 1:p.i + 2] and p.toks[p.i + 1][0] == "k":
            p.take()
    if p.peek()[0] == "k":
        p.take()
        exp, seen = 1, True
        if p.peek() == ("op", "^"):
            p.take()
            kind, val = p.take()
            if kind != "num" or val.denominator != 1:
                raise ParseError("expected an integer exponent after k^")
            exp = int(val)
    if not seen:
        return None
    if p.peek() == ("op", "/"):
        p.take()
        kind, val = p.take()
        if kind != "num" or not val:
            raise ParseError("expected a nonzero number after '/'")
        coeff /= val
    return KPoly.from_dict({exp: coeff})


def _parse_kpoly(p: _Parser):
    from .kpoly import KPoly
    total, first = KPoly(), True
    while True:
        sign = 1
        kind, val = p.peek()
        if kind == "op" and val in "+-":
            p.take()
            sign = -1 if val == "-" else 1
        elif not first:
            return total
        mono = _parse_kpoly_monomial(p)
        if mono is None:
            raise ParseError(f"expected a polynomial in k, got {p.peek()[1]!r}")
        total = total + mono * sign
        first = False


def _parse_factor(p: _Parser, alg: VertexAlgebra):
    from .vertex import UnknownGenerator
    t = 0
    if p.peek()[0] == "deriv":
        t = p.take()[1]
    kind, val = p.peek()
    if kind == "sym":
        p.take()
        sym, i, j, r = val
        try:
            st = alg.by_symbol(sym, (i, j, r))
        except UnknownGenerator as exc:
            raise ParseError(exc.args[0]) from None
    elif (kind, val) == ("op", ":("):
        p.take()
        st = _parse_sum(p, alg, closing="):")
        p.expect_op("):")
    else:
        raise ParseError(f"expected a generator or ':(' group, got {val!r}")
    return st.derivative(t) if t else st


def _parse_sum(p: _Parser, alg: VertexAlgebra, closing: str | None = None):
    from .vertex import product
    total = alg.zero()
    first = True
    while not p.at_end() and p.peek() != ("op", closing):
        sign = 1
        kind, val = p.peek()
        if kind == "op" and val in "+-":
            p.take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}")
        first = False
        coeff, explicit = None, False
        if p.peek() == ("op", "("):
            p.take()
            coeff = _parse_kpoly(p)
            p.expect_op(")")
            explicit = True
        else:
            coeff = _parse_kpoly_monomial(p)
            explicit = coeff is not None
        if p.peek() == ("op", "*"):
            p.take()
        factors = []
        while p.peek()[0] in ("sym", "deriv") or p.peek() == ("op", ":("):
            factors.append(_parse_factor(p, alg))
        if not factors and not explicit:
            raise ParseError(f"expected a term, got {p.peek()[1]!r}")
        term = product(*factors) if factors else alg.one()
        if coeff is not None:
            term = term * coeff
        total = total + term * sign
    if first:
        raise ParseError("empty expression")
    return total


def parse_state(text: str, alg: VertexAlgebra) -> VState:
    """Parse the vertex text form; juxtaposition is the right-nested normal product."""
    p = _Parser(_tokenize(text))
    st = _parse_sum(p, alg)
    if not p.at_end():
        raise ParseError(f"unexpected {p.peek()[1]!r}")
    return st
