"""Polynomials in the level symbol k with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


class KPoly:
    """Immutable element of Q[k]; ``coeffs[e]`` is the coefficient of k^e."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("KPoly is immutable")

    @classmethod
    def const(cls, c) -> KPoly:
        return cls((c,))

    @classmethod
    def k(cls) -> KPoly:
        return cls((0, 1))

    @classmethod
    def from_dict(cls, d: dict[int, Fraction]) -> KPoly:
        if not d:
            return cls()
        top = max(d)
        return cls(d.get(e, 0) for e in range(top + 1))

    def as_dict(self) -> dict[int, Fraction]:
        return {e: c for e, c in enumerate(self.coeffs) if c}

    @staticmethod
    def _lift(x) -> KPoly:
        if isinstance(x, KPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return KPoly.const(x)
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_value(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other) -> KPoly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return KPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> KPoly:
        return KPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> KPoly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> KPoly:
        return (-self) + other

    def __mul__(self, other) -> KPoly:
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return KPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return KPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs) if len(self.coeffs) > 1 else hash(self.const_value())

    def __call__(self, k) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * k + c
        return total

    def leading_negative(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] < 0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            pieces.append((c < 0, _term(abs(c), e)))
        head = ("-" if pieces[0][0] else "") + pieces[0][1]
        return head + "".join(("-" if neg else "+") + body for neg, body in pieces[1:])

    def __repr__(self) -> str:
        return f"KPoly({self})"


def _term(c: Fraction, e: int) -> str:
    if e == 0:
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    var = "k" if e == 1 else f"k^{e}"
    num = "" if c.numerator == 1 else str(c.numerator)
    return num + var + ("" if c.denominator == 1 else f"/{c.denominator}")


K = KPoly.k()
ONE = KPoly.const(1)
ZERO = KPoly()
