"""Command-line interface: ``gwalg describe | generators | check | bracket | axioms``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import finite_w
from .brst import (NotClosed, build_context, minimal_affine_generators,
                   validate_affine_generating_set)
from .centralizer import CentElt, GradedData, MuSizeMismatch
from .pyramids import PartitionError, Pyramid, parse_partition, row_partition
from .textio import ParseError, format_fraction, parse_state, parse_uea
from .uea import UEA

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# a generating set of W^k((2,2),(2))
PRINCIPAL_22 = [
    ("w1", "J[1,1,0] + J[2,2,0]"),
    ("w2", "J[1,1,1] + J[2,2,1]"),
    ("w3", "J[2,1,0] + J[1,1,0] J[2,2,1] + J[1,1,1] J[2,2,0] - (k+2) D^1 J[1,1,1]"),
    ("w4", "J[2,1,1] + J[1,1,1] J[2,2,1]"),
]


class UsageError(Exception):
    pass


class Output:
    def __init__(self, cfg, lam: Pyramid, mu: Pyramid):
        self.fmt = cfg.format
        self.context = {"lambda": list(lam.parts), "mu": list(mu.parts), "N": lam.N, "n": lam.n}
        self.results: list[dict] = []
        self.extra: dict = {}
        self.lines: list[str] = []

    def result(self, name, weight, expression, checks: dict):
        self.results.append({"name": name, "weight": weight,
                             "expression": expression, "checks": checks})
        flags = " ".join(f"{k}={'yes' if v else 'NO'}" for k, v in checks.items())
        wt = "" if weight is None else f" (weight {weight})"
        self.lines.append(f"{name}{wt}: {expression}" + (f"   [{flags}]" if flags else ""))

    def text(self, line: str = ""):
        self.lines.append(line)

    def emit(self):
        if self.fmt == "json":
            doc = {"context": self.context, "results": self.results}
            doc.update(self.extra)
            print(json.dumps(doc, indent=2, default=str))
        else:
            ctx = self.context
            print(f"lambda={tuple(ctx['lambda'])} mu={tuple(ctx['mu'])} N={ctx['N']} n={ctx['n']}")
            for line in self.lines:
                print(line)


def _pyramids(cfg, default_mu=None) -> tuple[Pyramid, Pyramid]:
    try:
        lam = parse_partition(cfg.lam)
        if cfg.mu is not None:
            mu = parse_partition(cfg.mu)
        elif default_mu is not None:
            mu = default_mu(lam)
        else:
            raise UsageError("--mu is required for this command")
    except PartitionError as exc:
        raise UsageError(str(exc)) from None
    if mu.N != lam.n:
        raise UsageError(f"mu must have {lam.n} boxes (rows of lambda), got {mu.N}")
    return lam, mu


def _read_elements(path: str | None, inline: Sequence[str] | None) -> list[tuple[int, str]]:
    if inline:
        return [(0, e) for e in inline]
    if path is None:
        raise UsageError("give an element file or -e EXPR")
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    out = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    if not out:
        raise UsageError(f"{path}: no elements found")
    return out


def _parse_at(no: int, text: str, fn, *args):
    try:
        return fn(text, *args)
    except ParseError as exc:
        where = f"line {no}: " if no else ""
        raise UsageError(f"{where}{exc}") from None


def _hist(d: dict) -> str:
    return ", ".join(f"weight {w}: {c}" for w, c in sorted(d.items())) or "empty"


# ------------------------------------------------------------------- commands
def cmd_describe(cfg) -> int:
    lam, mu = _pyramids(cfg)
    data = GradedData(lam, mu)
    out = Output(cfg, lam, mu)
    cent = data.cent
    kernel = data.ker_phi_basis()
    gram = {f"({x},{y})": format_fraction(v) for (x, y), v in sorted(cent._gram0.items())}
    out.extra["describe"] = {
        "dim_a": cent.dim,
        "S_lambda_mu": [str(i) for i in data.n_indices],
        "e": str(data.e),
        "chi_support": [list(i) for i in sorted(data.chi_support)],
        "h": str(data.h),
        "gram_a0": gram,
        "phi_rank": data.phi_rank(),
        "dim_a0": len(data.zero_indices),
        "ker_phi": [{"element": str(x), "weight": w} for x, w in kernel],
        "ker_phi_profile": data.ker_phi_profile(),
    }
    out.text(f"dim a = {cent.dim}")
    out.text(f"n (S_lambda,mu, {len(data.n_indices)}): " + (" ".join(map(str, data.n_indices)) or "empty"))
    out.text(f"e = {data.e}")
    out.text("chi support: {" + ", ".join(str(tuple(i)) for i in sorted(data.chi_support)) + "}")
    out.text(f"h = {data.h}")
    out.text(f"bilinear form on a_0 ({len(gram)} nonzero entries):")
    for key, val in gram.items():
        out.text(f"  {key} = {val}")
    out.text(f"rank phi = {data.phi_rank()}, dim a(0) = {len(data.zero_indices)}")
    out.text(f"ker phi basis ({len(kernel)}):")
    for x, w in kernel:
        out.text(f"  [weight {w}] {x}")
    out.text(f"ker phi weights: {_hist(data.ker_phi_profile())}")
    if not data.n_indices:
        out.text("n is empty: U(lambda, mu) = U(a)")
    out.emit()
    return EXIT_OK


def cmd_generators(cfg) -> int:
    shape = cfg.shape
    default_mu = (lambda lam: row_partition(lam.n)) if shape == "principal" else (
        lambda lam: finite_w.minimal_partition(lam.n))
    lam, mu = _pyramids(cfg, default_mu)
    out = Output(cfg, lam, mu)
    try:
        if cfg.kind == "finite":
            ok = _finite(cfg, lam, mu, out)
        else:
            ok = _affine(cfg, lam, mu, out)
    except finite_w.BadMu as exc:
        raise UsageError(str(exc)) from None
    out.emit()
    return EXIT_OK if ok else EXIT_FAIL


def _finite(cfg, lam, mu, out: Output) -> bool:
    if cfg.shape == "principal":
        if mu != row_partition(lam.n):
            raise UsageError(f"principal shape needs mu = ({lam.n})")
        gens = finite_w.principal_generators(lam)
        data = gens[0].psi.alg.data
        named = [(f"Psi[{g.m},{g.r}]", g.psi) for g in gens]
    else:
        mg = finite_w.minimal_generators(lam, mu)
        data = mg.data
        named = [(f"B1[{i + 1}]", x) for i, x in enumerate(mg.weight1)]
        named += [(f"W[{idx.i},{idx.j},{idx.r}]", x) for idx, x in mg.weight2]
    report = finite_w.validate_generating_set(data, [x for _, x in named])
    for (name, x), inv in zip(named, report.invariant):
        out.result(name, x.kazhdan_degree(), str(x), {"invariant": inv})
    for w in report.witnesses:
        out.text(f"witness: {w}")
    _report_lines(out, report.as_dict())
    return report.passed


def _affine(cfg, lam, mu, out: Output) -> bool:
    ctx = build_context(lam, mu)
    if cfg.shape == "principal":
        if mu != row_partition(lam.n):
            raise UsageError(f"principal shape needs mu = ({lam.n})")
        if lam.parts != (2, 2):
            raise UsageError("explicit affine principal generators are only available for lambda = 2,2")
        named = [(name, parse_state(text, ctx.reduced)) for name, text in PRINCIPAL_22]
    else:
        named = minimal_affine_generators(ctx)
    closed = []
    for name, x in named:
        c = not ctx.apply_Q_reduced(x)
        closed.append(c)
        out.result(name, x.conformal_weight(), str(x), {"closed": c})
    if not all(closed):
        bad = [n for (n, _), c in zip(named, closed) if not c]
        out.text("not closed: " + ", ".join(bad))
        out.extra["report"] = {"passed": False, "not_closed": bad}
        return False
    report = validate_affine_generating_set(ctx, named)
    _report_lines(out, report.as_dict())
    return report.passed


def _report_lines(out: Output, rep: dict):
    out.extra["report"] = rep
    out.text(f"expected (ker phi): {_hist(rep['expected_profile'])}")
    out.text(f"histogram:          {_hist(rep['weight_histogram'])}")
    out.text(f"span ranks:         {_hist(rep['span_ranks'])}")
    out.text(f"rank deficit: {rep['rank_deficit']}; linear parts in ker phi: {rep['linear_parts_in_ker_phi']}")
    out.text("PASS" if rep["passed"] else "FAIL")


def cmd_check(cfg) -> int:
    lam, mu = _pyramids(cfg)
    out = Output(cfg, lam, mu)
    elements = _read_elements(cfg.file, cfg.expr)
    ok_all = True
    if cfg.complex == "uea":
        alg = UEA(GradedData(lam, mu))
        for pos, (no, text) in enumerate(elements, 1):
            x = _parse_at(no, text, parse_uea, alg)
            res = alg.is_invariant(x)
            ok_all &= res.ok
            weight = x.kazhdan_degree() if x else None
            out.result(f"element {no or pos}", weight, str(x), {"invariant": res.ok})
            if not res.ok:
                out.text(f"  not invariant: witness {res.witness}, residue {res.residue}")
                out.results[-1]["witness"] = {"n": str(res.witness), "residue": str(res.residue)}
    else:
        ctx = build_context(lam, mu)
        for pos, (no, text) in enumerate(elements, 1):
            x = _parse_at(no, text, parse_state, ctx.reduced)
            q = ctx.apply_Q_reduced(x)
            ok_all &= not q
            out.result(f"element {no or pos}", x.conformal_weight(), str(x), {"closed": not q})
            if q:
                out.text(f"  not closed: Q = {q}")
                out.results[-1]["residue"] = str(q)
    out.emit()
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_bracket(cfg) -> int:
    lam, mu = _pyramids(cfg)
    out = Output(cfg, lam, mu)
    ctx = build_context(lam, mu)
    if cfg.expr:
        if len(cfg.expr) != 2:
            raise UsageError("bracket needs exactly two -e expressions")
        items = [(0, e) for e in cfg.expr]
    else:
        if len(cfg.files) != 2:
            raise UsageError("bracket needs two element files")
        items = [_read_elements(f, None)[0] for f in cfg.files]
    a, b = (_parse_at(no, text, parse_state, ctx.reduced) for no, text in items)
    br = ctx.reduced.lambda_bracket(a, b)
    out.result("bracket", None, str(br), {})
    out.extra["lambda_coefficients"] = {str(n): str(st) for n, st in br.coefficients().items()}
    out.emit()
    return EXIT_OK


def cmd_axioms(cfg) -> int:
    """Randomized skew-symmetry and Jacobi checks in the reduced complex."""
    from .vertex import jacobi_defect
    lam, mu = _pyramids(cfg)
    out = Output(cfg, lam, mu)
    alg = build_context(lam, mu).reduced
    rng = random.Random(cfg.seed)
    fails = {"skew": 0, "jacobi": 0}
    for _ in range(cfg.cases):
        a, b, c = (random_state(alg, rng, cfg.weight_bound) for _ in range(3))
        if alg.lambda_bracket(a, b) != alg.skew_symmetric_partner(a, b):
            fails["skew"] += 1
        if jacobi_defect(a, b, c):
            fails["jacobi"] += 1
    for name, n in fails.items():
        out.result(name, None, f"{cfg.cases - n}/{cfg.cases} cases", {"holds": n == 0})
    out.emit()
    return EXIT_OK if not any(fails.values()) else EXIT_FAIL


def random_state(alg, rng: random.Random, weight_bound: int = 4, max_letters: int = 3):
    """A random canonical monomial of weight at most ``weight_bound``, times a small rational."""
    while True:
        letters = []
        for _ in range(rng.randint(1, max_letters)):
            letters.append((rng.randrange(len(alg.gens)), rng.randint(0, 1)))
        if alg.weight(tuple(letters)) > weight_bound:
            continue
        st = alg.one()
        for g, t in reversed(letters):
            st = alg.normal_product(alg.gen(g, t), st)
        if st and st.parity() is not None and st.conformal_weight() is not None:
            return st * Fraction(rng.randint(1, 5), rng.randint(1, 3))


# ------------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", required=True, help="partition, e.g. 2,3,5")
    common.add_argument("--mu", default=None, help="partition with n boxes, e.g. 1,2")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--weight-bound", type=int, default=4)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="gwalg", description="Generalized finite and affine W-algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common], help="centralizer, grading, chi and ker phi")
    g = sub.add_parser("generators", parents=[common], help="emit and verify generator families")
    g.add_argument("kind", choices=("finite", "affine"))
    g.add_argument("shape", choices=("principal", "minimal"))
    c = sub.add_parser("check", parents=[common], help="invariance or Q-closedness of elements")
    c.add_argument("file", nargs="?", help="element file, one element per line ('-' for stdin)")
    c.add_argument("-e", "--expr", action="append", help="inline element (repeatable)")
    c.add_argument("--complex", choices=("uea", "vertex"), default="uea")
    b = sub.add_parser("bracket", parents=[common], help="lambda-bracket in the reduced complex")
    b.add_argument("files", nargs="*")
    b.add_argument("-e", "--expr", action="append")
    a = sub.add_parser("axioms", parents=[common], help="randomized vertex-algebra axiom checks")
    a.add_argument("--cases", type=int, default=50)
    return p


COMMANDS = {"describe": cmd_describe, "generators": cmd_generators, "check": cmd_check,
            "bracket": cmd_bracket, "axioms": cmd_axioms}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, MuSizeMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotClosed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
