"""Acceptance gate: ten criteria, each with its own time bound.

Every criterion prints one line ``PASS criterion N: ...`` or ``FAIL criterion N: ...``.
The lines are also repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` for the bare report.
"""

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from gwalg.brst import (build_context, conformal_vector_search, minimal_affine_generators,
                        validate_affine_generating_set)
from gwalg.centralizer import CentElt, Centralizer, GradedData
from gwalg.cli import PRINCIPAL_22, random_state
from gwalg.finite_w import (minimal_b1, principal_generators, principal_linear_parts,
                            validate_generating_set)
from gwalg.kpoly import K
from gwalg.pyramids import build, row_partition
from gwalg.textio import parse_state, parse_uea
from gwalg.uea import UEA, gr_linear_part, reduce_mod_ideal, span_rank
from gwalg.vertex import LambdaPoly

sys.path.insert(0, __file__.rsplit("/", 1)[0])
import props  # noqa: E402

RESULTS: dict[int, str] = {}

BRST_CONTEXTS = [((1, 1), (2,)), ((2, 2), (2,)), ((1, 2), (1, 1)), ((1, 1, 2), (1, 2)),
                 ((1, 1, 2, 2), (1, 1, 2))]


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    status, note = "PASS", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= limit:
            status, note = "FAIL", f" (time bound exceeded: {elapsed:.2f}s >= {limit:g}s)"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s, bound {limit:g}s")
    except BaseException as exc:
        status = "FAIL"
        if not note:
            note = f" ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"{status} criterion {number}: {title} [{elapsed:.2f}s < {limit:g}s]{note}"
        RESULTS[number] = line
        print(line)


def contexts(pairs):
    return [build_context(build(lam), build(mu)) for lam, mu in pairs]


def test_criterion_01_structure_constants():
    with criterion(1, "bracket formula equals the matrix commutator under embed", 5):
        for lam in [(1, 1), (2, 3), (1, 2, 2), (2, 3, 5)]:
            c = Centralizer(build(lam))
            mats = {i: c.embed(i) for i in c.basis_indices}
            for x, X in mats.items():
                for y, Y in mats.items():
                    assert (c.embed_elt(c.bracket_indices(x, y)) == X @ Y - Y @ X).all(), (lam, x, y)


PHI_PAIRS = [((2, 3), (2,)), ((2, 3), (1, 1)), ((1, 2, 2), (3,)), ((1, 2, 2), (1, 2)),
             ((1, 1, 2, 2), (1, 1, 2)), ((1, 1, 2, 2), (2, 2)), ((1, 1, 2, 3), (1, 1, 2)),
             ((2, 2, 3), (1, 2)), ((1, 1, 1, 1), (2, 2)), ((2, 3, 3), (3,)),
             ((1, 1, 1, 1, 2), (1, 2, 2)), ((4, 4), (2,)), ((1, 1, 3, 3), (1, 3))]


def test_criterion_02_phi_surjective():
    with criterion(2, f"rank phi = |S|, dim ker phi = dim a(0) on {len(PHI_PAIRS)} pairs, principal profiles", 5):
        for lam, mu in PHI_PAIRS:
            lp = build(lam)
            assert lp.N <= 8
            d = GradedData(lp, build(mu))
            assert d.phi_rank() == len(d.n_indices), (lam, mu)
            assert len(d.ker_phi_basis()) == len(d.zero_indices), (lam, mu)
            if d.mu == row_partition(lp.n):
                expected = {m: lp.part(lp.n - m + 1) for m in range(1, lp.n + 1)}
                assert d.ker_phi_profile() == expected, (lam, d.ker_phi_profile())


def test_criterion_03_brst_differential():
    with criterion(3, "[d lambda d] = 0 and reduced Q squared = 0 on all generators", 60):
        for ctx in contexts(BRST_CONTEXTS):
            assert not ctx.full.lambda_bracket(ctx.d, ctx.d)
            red = ctx.reduced
            for g in range(len(red.gens)):
                assert not ctx.apply_Q_reduced(ctx.apply_Q_reduced(red.gen(g))), red.gens[g]


def test_criterion_04_building_blocks():
    with criterion(4, "[d lambda J_a] and [J_a lambda phi_n] match the building-block formulas", 60):
        for ctx in contexts(BRST_CONTEXTS):
            full = ctx.full
            for a in ctx.cent.basis_indices:
                A = CentElt.basis(a)
                block = ctx.building_block(A)
                if a in ctx.data.p_indices:
                    assert full.lambda_bracket(ctx.d, block) == ctx.expected_d_block(A), a
                for n in ctx.data.n_indices:
                    expected = ctx.ghost(ctx.cent.bracket(A, CentElt.basis(n)))
                    got = full.lambda_bracket(block, ctx.ghost(CentElt.basis(n)))
                    assert got == LambdaPoly.from_coefficients(full, {0: expected}), (a, n)


def test_criterion_05_example_22():
    with criterion(5, "lambda=(2,2), mu=(2): closed generators, bracket table, no conformal vector", 30):
        ctx = build_context(build((2, 2)), build((2,)))
        red = ctx.reduced
        w = {name: parse_state(text, red) for name, text in PRINCIPAL_22}
        for name, x in w.items():
            assert not ctx.apply_Q_reduced(x), name
        target = -(K + 4) * w["w4"] + red.normal_product(w["w2"], w["w2"]) * (K * Fraction(1, 4) + 1)
        expected = LambdaPoly.from_coefficients(red, {0: target.derivative(), 1: target * 2})
        assert red.lambda_bracket(w["w3"], w["w3"]) == expected
        for a in w:
            for b in w:
                if (a, b) != ("w3", "w3"):
                    assert not red.lambda_bracket(w[a], w[b]), (a, b)
        N = red.normal_product
        ansatz = [w["w1"].derivative(), w["w2"].derivative(), N(w["w1"], w["w1"]),
                  N(w["w1"], w["w2"]), N(w["w2"], w["w2"]), w["w3"], w["w4"]]
        result = conformal_vector_search(ansatz)
        assert not result.solvable, result.solution


def test_criterion_06_principal_finite():
    with criterion(6, "principal finite case: centrality, invariance, count N, linear parts, commutativity", 120):
        for lam in [(2, 3), (1, 2, 2), (2, 2)]:
            p = build(lam)
            gens = principal_generators(p)
            alg = gens[0].phi.alg
            assert len(gens) == p.N
            for g in gens:
                for idx in alg.data.cent.basis_indices:
                    assert alg.ad(CentElt.basis(idx), g.phi) == 0, (lam, g.m, g.r, idx)
                assert alg.is_invariant(g.psi).ok, (lam, g.m, g.r)
            parts = principal_linear_parts(p)
            for g, (m, r, lin) in zip(gens, parts):
                assert gr_linear_part(g.psi) == (m, lin), (lam, m, r)
            assert span_rank([lin for _, _, lin in parts], alg.data.p_indices) == p.N
            for a in gens:
                for b in gens:
                    assert reduce_mod_ideal(a.psi * b.psi - b.psi * a.psi) == 0


MINIMAL_1122_WEIGHT2 = [
    "E[4,1,0] + E[3,1,0] E[4,4,1]",
    "E[4,2,0] + E[3,2,0] E[4,4,1]",
    "E[4,3,1] + E[3,3,1] E[4,4,1]",
    "E[4,3,0] + E[3,3,0] E[4,4,1] + E[3,3,1] E[4,4,0] - E[3,1,0] E[1,3,1] - E[3,2,0] E[2,3,1] - 2 E[3,3,1]",
]


def test_criterion_07_minimal_finite():
    with criterion(7, "minimal finite case lambda=(1,1,2,2): 12 invariant generators, histogram (8,4)", 30):
        data = GradedData(build((1, 1, 2, 2)), build((1, 1, 2)))
        alg = UEA(data)
        cands = [alg.from_cent(b) for b in minimal_b1(data)]
        cands += [parse_uea(t, alg) for t in MINIMAL_1122_WEIGHT2]
        for x in cands:
            assert alg.is_invariant(x).ok, str(x)
        assert len(cands) == 12 == len(data.zero_indices)
        report = validate_generating_set(data, cands)
        assert report.histogram == {1: 8, 2: 4} and report.passed


def test_criterion_08_minimal_affine():
    with criterion(8, "minimal affine case: B1 and B2 generators closed, validator passes", 60):
        for lam in [(1, 1, 2, 2), (1, 1, 2, 3)]:
            ctx = build_context(build(lam), build((1, 1, 2)))
            named = minimal_affine_generators(ctx)
            assert len([n for n, _ in named if n.startswith("G")]) == sum(lam[:-1])
            for name, x in named:
                assert not ctx.apply_Q_reduced(x), (lam, name)
            if lam == (1, 1, 2, 3):
                for name, x in named:
                    if name.startswith("G"):
                        assert all(t == 0 for mono in x.monomials() for _, t in mono), name
            assert validate_affine_generating_set(ctx, named).passed


def test_criterion_09_degenerate_mu():
    with criterion(9, "mu=(1,...,1): every element invariant, reduced table has no tau", 5):
        rng = random.Random(9)
        for lam in [(1, 2), (2, 3), (1, 1, 2), (2, 2)]:
            p = build(lam)
            data = GradedData(p, build((1,) * p.n))
            alg = UEA(data)
            basis = data.cent.basis_indices
            for _ in range(25):
                x = alg.word([rng.choice(basis) for _ in range(rng.randint(1, 3))], rng.randint(1, 5))
                assert alg.is_invariant(x).ok
            ctx = build_context(p, build((1,) * p.n))
            red = ctx.reduced
            for a in basis:
                for b in basis:
                    A, B = CentElt.basis(a), CentElt.basis(b)
                    assert data.trace_term(A, B) == 0
                    expected = LambdaPoly.from_coefficients(
                        red, {0: ctx.J(ctx.cent.bracket(A, B)),
                              1: red.scalar(K * ctx.cent.form(A, B))})
                    assert red.lambda_bracket(ctx.J(A), ctx.J(B)) == expected, (a, b)


AXIOM_CONTEXTS = [((2, 2), (2,)), ((1, 1, 2, 2), (1, 1, 2)), ((1, 1, 1), (3,))]
AXIOM_CASES = 200


def test_criterion_10_vertex_axioms():
    title = (f"skew, Jacobi, Wick, weight additivity, [h,a]=j_a a on {AXIOM_CASES} "
             f"cases x {len(AXIOM_CONTEXTS)} contexts")
    with criterion(10, title, 120):
        for lam, mu in AXIOM_CONTEXTS:
            ctx = build_context(build(lam), build(mu))
            alg = ctx.reduced
            rng = random.Random(2024)
            for case in range(AXIOM_CASES):
                a, b, c = (random_state(alg, rng, 4) for _ in range(3))
                where = (lam, mu, case, str(a), str(b), str(c))
                assert props.skew_holds(a, b), where
                assert props.jacobi_holds(a, b, c), where
                assert props.wick_holds(a, b, c), where
                assert props.quasi_commutativity_holds(a, b), where
                assert props.weight_additivity_holds(a, b), where
                assert props.h_grading_holds(ctx, a), where


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except BaseException:
                failed += 1
    sys.exit(1 if failed else 0)
