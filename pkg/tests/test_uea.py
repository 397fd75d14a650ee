import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from gwalg.centralizer import CentElt, GenIndex, GradedData
from gwalg.pyramids import build
from gwalg.textio import parse_uea
from gwalg.uea import (UEA, ContextMismatch, ZeroElement, commutator,
                       gr_linear_part, is_invariant, reduce_mod_ideal)


def alg_for(lam, mu):
    return UEA(GradedData(build(lam), build(mu)))


def matrix_image(x):
    # U(a) -> Mat_N extends the embedding a -> gl_N
    cent = x.alg.data.cent
    N = x.alg.data.lam.N
    total = np.zeros((N, N), dtype=object)
    for mono, c in x:
        m = np.eye(N, dtype=object) * Fraction(1)
        for idx in mono:
            m = m.dot(cent.embed(idx).astype(object))
        total = total + m * c
    return total


def test_unit_and_gl2():
    alg = alg_for((1, 1), (1, 1))
    e11 = alg.gen((1, 1, 0))
    assert e11 * alg.one() == e11 == alg.one() * e11
    lhs = commutator(alg.gen((1, 2, 0)), alg.gen((2, 1, 0)))
    assert lhs == alg.gen((1, 1, 0)) - alg.gen((2, 2, 0))


def test_pbw_order_is_enforced():
    alg = alg_for((1, 1), (1, 1))
    x = alg.gen((2, 1, 0)) * alg.gen((1, 2, 0))
    for mono, _ in x.terms.items():
        assert list(mono) == sorted(mono)
    with pytest.raises(ValueError):
        type(x)(alg, {(3, 0): 1})


@pytest.mark.parametrize("mu", [(2,), (1, 1)])
def test_associativity_exhaustive_short_words(mu):
    alg = alg_for((1, 2), mu)
    basis = alg.data.cent.basis_indices
    monos = [alg.one()] + [alg.gen(i) for i in basis]
    monos += [alg.gen(a) * alg.gen(b) for a, b in itertools.product(basis, repeat=2)]
    rng = random.Random(3)
    for _ in range(300):
        x, y, z = (rng.choice(monos) for _ in range(3))
        assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("lam, mu", [((1, 2), (2,)), ((2, 2), (2,)), ((1, 2, 2), (1, 2))])
def test_products_match_matrix_representation(lam, mu):
    alg = alg_for(lam, mu)
    basis = alg.data.cent.basis_indices
    cent = alg.data.cent
    rng = random.Random(11)
    for _ in range(60):
        word = [rng.choice(basis) for _ in range(rng.randint(1, 4))]
        expected = np.eye(alg.data.lam.N, dtype=object) * Fraction(1)
        for idx in word:
            expected = expected.dot(cent.embed(idx).astype(object))
        assert (matrix_image(alg.word(word)) == expected).all()


def test_leibniz_random():
    alg = alg_for((1, 2, 2), (1, 2))
    basis = alg.data.cent.basis_indices
    rng = random.Random(5)
    for _ in range(40):
        n = CentElt.basis(rng.choice(alg.data.n_indices))
        x = alg.word([rng.choice(basis) for _ in range(2)])
        y = alg.word([rng.choice(basis) for _ in range(2)])
        assert alg.ad(n, x * y) == alg.ad(n, x) * y + x * alg.ad(n, y)
    assert alg.ad(n, alg.one()) == 0


def test_reduce_rules():
    alg = alg_for((2, 2), (2,))
    assert reduce_mod_ideal(alg.gen((1, 2, 1))) == -1
    assert reduce_mod_ideal(alg.gen((1, 1, 0)) * alg.gen((1, 2, 0))) == 0
    assert reduce_mod_ideal(alg.gen((1, 2, 0)) * alg.gen((1, 1, 0))) == 0
    x = alg.gen((2, 1, 0)) * alg.gen((1, 2, 1))
    assert reduce_mod_ideal(x) == -alg.gen((2, 1, 0))


def test_reduce_identity_without_n():
    alg = alg_for((1, 2), (1, 1))
    x = alg.gen((1, 2, 1)) * alg.gen((2, 1, 0)) + alg.gen((2, 2, 1))
    assert reduce_mod_ideal(x) == x


def test_reduce_is_idempotent_and_lands_in_p():
    alg = alg_for((1, 2, 2), (1, 2))
    basis = alg.data.cent.basis_indices
    rng = random.Random(2)
    n_start = alg.n_start
    for _ in range(30):
        x = alg.word([rng.choice(basis) for _ in range(3)])
        r = reduce_mod_ideal(x)
        assert reduce_mod_ideal(r) == r
        assert all(z < n_start for m in r.terms for z in m)


def test_invariance_examples():
    alg = alg_for((1, 1, 2, 2), (1, 1, 2))
    assert is_invariant(alg.one())
    good = parse_uea("E[4,1,0] + E[3,1,0] E[4,4,1]", alg)
    assert is_invariant(good).ok
    bad = is_invariant(alg.gen((4, 1, 0)))
    assert not bad.ok and bad.witness in alg.data.n_set and bad.residue


def test_invariants_closed_under_products():
    alg = alg_for((1, 1, 2, 2), (1, 1, 2))
    x = parse_uea("E[4,1,0] + E[3,1,0] E[4,4,1]", alg)
    y = alg.gen((1, 1, 0))
    assert is_invariant(x * y).ok and is_invariant(y * x + x).ok


def test_everything_invariant_without_n():
    alg = alg_for((1, 2), (1, 1))
    for idx in alg.data.cent.basis_indices:
        assert is_invariant(alg.gen(idx) * alg.gen((2, 1, 0))).ok


def test_kazhdan_and_linear_part():
    alg = alg_for((1, 1, 2, 2), (1, 1, 2))
    x = parse_uea("E[4,1,0] + E[3,1,0] E[4,4,1]", alg)
    assert gr_linear_part(x) == (2, CentElt.basis((4, 1, 0)))
    for idx in alg.data.cent.basis_indices:
        assert alg.gen(idx).kazhdan_degree() == 1 - alg.data.deg[idx]
    with pytest.raises(ZeroElement):
        alg.zero().kazhdan_degree()


def test_context_mismatch():
    a = alg_for((1, 1), (1, 1))
    b = alg_for((1, 1), (2,))
    with pytest.raises(ContextMismatch):
        a.gen((1, 1, 0)) + b.gen((1, 1, 0))
