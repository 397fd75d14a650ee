"""Independent checks of the lambda-bracket axioms, shared by the vertex and acceptance tests."""

from fractions import Fraction

from gwalg.centralizer import GenIndex
from gwalg.vertex import LambdaPoly, VState, jacobi_defect


def _sign(a, b):
    return -1 if a.parity() and b.parity() else 1


def skew_holds(a, b):
    alg = a.alg
    return alg.lambda_bracket(a, b) == alg.skew_symmetric_partner(a, b)


def jacobi_holds(a, b, c):
    return not jacobi_defect(a, b, c)


def wick_rhs(a, b, c):
    """:[a_l b] c: + p(a,b) :b [a_l c]: + int_0^l [[a_l b]_m c] dm, as {n: state}."""
    alg = a.alg
    out = {}

    def add(n, st):
        out[n] = out.get(n, alg.zero()) + st

    for n, x in alg.lambda_bracket(a, b).coefficients().items():
        add(n, alg.normal_product(x, c))
        for m, y in alg.lambda_bracket(x, c).coefficients().items():
            add(n + m + 1, y * Fraction(1, m + 1))
    for n, x in alg.lambda_bracket(a, c).coefficients().items():
        add(n, alg.normal_product(b, x) * _sign(a, b))
    return {n: st for n, st in out.items() if st}


def wick_holds(a, b, c):
    alg = a.alg
    lhs = alg.lambda_bracket(a, alg.normal_product(b, c))
    return lhs == LambdaPoly.from_coefficients(alg, wick_rhs(a, b, c))


def quasi_commutativity_holds(a, b):
    """:ab: - p(a,b) :ba: = int_{-d}^0 [a_l b] dl."""
    alg = a.alg
    lhs = alg.normal_product(a, b) - alg.normal_product(b, a) * _sign(a, b)
    rhs = alg.zero()
    for n, x in alg.lambda_bracket(a, b).coefficients().items():
        rhs += alg.derivative(x, n + 1) * Fraction((-1) ** n, n + 1)
    return lhs == rhs


def weight_additivity_holds(a, b):
    """Every lambda^n coefficient is a_(n)b / n! of weight D(a) + D(b) - n - 1."""
    wa, wb = a.conformal_weight(), b.conformal_weight()
    for n, x in a.alg.lambda_bracket(a, b).coefficients().items():
        for (mono, _), _c in x.terms.items():
            if a.alg.weight(mono) != wa + wb - n - 1:
                return False
    return True


def charge(ctx, x: VState):
    """mu-grading charge: deg(b) for J_b, -deg(I) for phi^I; None if inhomogeneous."""
    data, gens = ctx.data, ctx.reduced.gens
    out = set()
    for (mono, _), _c in x.terms.items():
        total = 0
        for g, _t in mono:
            d = data.deg[GenIndex(*gens[g].index)]
            total += d if gens[g].kind == "block" else -d
        out.add(total)
    return out.pop() if len(out) == 1 else None


def h_grading_holds(ctx, x):
    """[J_h lambda x] at lambda^0 is j_x x."""
    red = ctx.reduced
    zero_mode = red.lambda_bracket(ctx.J(ctx.data.h), x).at_zero()
    j = charge(ctx, x)
    return j is not None and zero_mode == x * j


def monomial_states(x):
    """Split a state into homogeneous single-monomial states."""
    return [VState(x.alg, {key: c}) for key, c in x.terms.items()]


