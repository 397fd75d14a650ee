from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gwalg.centralizer import GradedData
from gwalg.kpoly import K, ONE, ZERO, KPoly
from gwalg.pyramids import build
from gwalg.textio import ParseError, parse_state, parse_uea
from gwalg.uea import UEA

fractions = st.fractions(max_denominator=12).filter(lambda f: abs(f) < 50)
kpolys = st.lists(fractions, max_size=4).map(KPoly)


def test_kpoly_printing():
    assert str(K * Fraction(1, 4) + 1) == "k/4+1"
    assert str(2 * K + 8) == "2k+8"
    assert str(-(K + 4)) == "-k-4"
    assert str(ZERO) == "0"
    assert str(K * K - 3) == "k^2-3"


def test_kpoly_basics():
    assert (K + 2)(Fraction(1, 2)) == Fraction(5, 2)
    assert ONE.is_const() and not K.is_const()
    assert KPoly.const(3) == 3 and hash(KPoly.const(3)) == hash(Fraction(3))
    with pytest.raises(AttributeError):
        K.coeffs = ()


@given(kpolys, kpolys, kpolys)
def test_kpoly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == ZERO
    assert (a * b)(3) == a(3) * b(3)


def test_uea_round_trip():
    alg = UEA(GradedData(build((1, 1, 2, 2)), build((1, 1, 2))))
    text = "E[4,3,0] + E[3,3,0] E[4,4,1] - 2 E[3,3,1] + 1/3"
    x = parse_uea(text, alg)
    assert parse_uea(str(x), alg) == x
    assert parse_uea("3/2*E[1,1,0]", alg) == alg.gen((1, 1, 0)) * Fraction(3, 2)


@pytest.mark.parametrize("text", ["", "E[1,1,0] +", "E[9,9,0]", "J[1,1,0]", "E[1,1,0] E[", "E[3,4,1] ) "])
def test_uea_parse_errors(text):
    alg = UEA(GradedData(build((1, 1, 2, 2)), build((1, 1, 2))))
    with pytest.raises(ParseError):
        parse_uea(text, alg)


def test_state_round_trip(ctx_factory):
    red = ctx_factory((2, 2), (2,)).reduced
    for text in ["J[2,1,0] + J[1,1,0] J[2,2,1] + J[1,1,1] J[2,2,0] - (k+2) D^1 J[1,1,1]",
                 "1/2 Phi*[1,2,0] D^2 Phi*[1,2,1]", "(k/4+1) J[1,1,0] J[2,2,1] - 3"]:
        x = parse_state(text, red)
        assert parse_state(str(x), red) == x


def test_state_groups_are_normal_products(ctx_factory):
    red = ctx_factory((2, 2), (2,)).reduced
    x = parse_state(":( J[1,1,0] + J[2,2,0] ): J[1,1,0]", red)
    a, b = parse_state("J[1,1,0]", red), parse_state("J[2,2,0]", red)
    assert x == red.normal_product(a + b, a)


def test_full_complex_resolves_building_blocks(ctx_factory):
    ctx = ctx_factory((2, 2), (2,))
    from gwalg.centralizer import CentElt
    assert parse_state("J[2,1,0]", ctx.full) == ctx.building_block(CentElt.basis((2, 1, 0)))


@pytest.mark.parametrize("text", ["J[9,9,9]", "J[1,1,0] +", "E[1,1,0]", "(k+", "D^ J[1,1,0]"])
def test_state_parse_errors(ctx_factory, text):
    red = ctx_factory((2, 2), (2,)).reduced
    with pytest.raises(ParseError):
        parse_state(text, red)
