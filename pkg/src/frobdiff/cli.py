"""Command-line front end: session files, dispatch, canonical output.

A session file is line-oriented ``key = value`` within [field], [tower],
[bind], [algebra] and [primitive] sections:

    [field]
    p = 2
    n = 1
    generators = s, t
    d(s) = 0
    d(t) = 1

    [tower]
    x^2 = s          # generator x with x^2 = s, then its image
    d(x) = 0

    [bind]
    a = t^2 + 1

    [algebra]
    basis = 1, e
    e*e = 0
    d(e, t) = 1

    [primitive]
    u = t
    v = 1
    G = Y0 + X0 + t

Exit codes: 0 on success, 1 on domain errors, 2 on syntax errors.  With
--json, each command prints one JSON object with keys status, value and
(for searches) witness.  The selftest subcommand honours FROBDIFF_SEED.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys

from .base_field import FieldSpec, RatFunc
from .boperator import AlgebraB, BOperator, bop_apply, validate_algebra
from .diffpoly import DiffPoly, JetTuple, delta, evaluate, order, separant
from .errors import FrobdiffError, ParseError
from .frob_derivation import (
    FrobDerivation,
    SubfieldSpec,
    TowerElement,
    TowerSpec,
    compose,
    linear_disjointness_check,
    strictness_witness,
)
from .geometry import IdealGens, check_section, prolong
from .kpoly import KPoly
from .primitive_element import (
    AnnihilatorPoly,
    UVContext,
    find_lambda,
    partial_identity_check,
    recover_power,
)
from .reduction import SearchConfig, combine_system, lambda0_rewrite, pipeline_reduce, wood_solve
from .syntax import (
    EvalError,
    collect_xy_vars,
    format_value,
    parse_expr,
    parse_formula,
    to_formula,
    to_kpoly,
    to_value,
)


class Session:
    """Field, derivation, optional tower/algebra/primitive data, and bindings."""

    def __init__(self, spec, deriv, tower=None):
        self.spec = spec
        self.deriv = deriv
        self.tower = tower
        self.bindings = {}
        self.algebra = None
        self.bop = None
        self.uv_data = None  # (u, v, G AnnihilatorPoly)

    @classmethod
    def default(cls, p=2, n=1):
        spec = FieldSpec(p, ["t"])
        return cls(spec, FrobDerivation(n, spec, {"t": 1}))

    def context(self):
        return self.tower if self.tower is not None else self.deriv

    def eval_expr(self, text):
        return to_value(parse_expr(text), self)


_KEY_IMAGE = re.compile(r"^d\((\w+)\)$")
_KEY_TOWER = re.compile(r"^(\w+)\^(\d+)$")
_KEY_PRODUCT = re.compile(r"^(\w+)\*(\w+)$")
_KEY_BOP_IMAGE = re.compile(r"^d\((\w+),\s*(\w+)\)$")


def load_session(path: str, n_default=1) -> Session:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_session(text, n_default)


def parse_session(text: str, n_default=1) -> Session:
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, [])
            continue
        if "=" not in line or current is None:
            raise ParseError(f"malformed session line {lineno}: {raw!r}", 0)
        key, value = line.split("=", 1)
        sections[current].append((key.strip(), value.strip(), lineno))
    if "field" not in sections:
        raise ParseError("session file needs a [field] section", 0)

    field_items = dict((k, v) for k, v, _ in sections["field"])
    p = int(field_items.pop("p", "2"))
    n = int(field_items.pop("n", str(n_default)))
    gens = [g.strip() for g in field_items.pop("generators", "t").split(",") if g.strip()]
    spec = FieldSpec(p, gens)
    shell = Session(spec, None)
    images = {}
    for key, value in field_items.items():
        match = _KEY_IMAGE.match(key)
        if not match:
            raise ParseError(f"unknown field key {key!r}", 0)
        img = to_value(parse_expr(value), shell)
        images[match.group(1)] = img
    for g in gens:
        images.setdefault(g, 0)
    deriv = FrobDerivation(n, spec, images)
    session = Session(spec, deriv)

    if "tower" in sections:
        tower_gens = []
        image_lines = []
        for key, value, lineno in sections["tower"]:
            rel = _KEY_TOWER.match(key)
            img = _KEY_IMAGE.match(key)
            if rel:
                name, power = rel.group(1), int(rel.group(2))
                e = _power_exponent(power, p, name)
                w = session.eval_expr(value)
                if not isinstance(w, RatFunc):
                    raise ParseError(f"tower value for {name!r} must be a base element", 0)
                tower_gens.append((name, e, w))
            elif img:
                image_lines.append((img.group(1), value))
            else:
                raise ParseError(f"unknown tower key {key!r}", 0)
        tower = TowerSpec(deriv, tower_gens)
        session.tower = tower
        tower_images = {}
        for name, value in image_lines:
            tower_images[name] = to_value(parse_expr(value), session)
        tower.set_images(tower_images)

    for key, value, _ in sections.get("bind", []):
        session.bindings[key] = session.eval_expr(value)

    if "algebra" in sections:
        session.algebra, session.bop = _parse_algebra(sections["algebra"], session)

    if "primitive" in sections:
        items = dict((k, v) for k, v, _ in sections["primitive"])
        if not {"u", "v", "G"} <= set(items):
            raise ParseError("[primitive] needs u, v and G", 0)
        u = session.eval_expr(items["u"])
        v = session.eval_expr(items["v"])
        g_ast = parse_expr(items["G"])
        t, s = collect_xy_vars(g_ast)
        if t < 0 and s < 0:
            raise ParseError("G must mention X0..Xt or Y0..Ys", 0)
        t, s = max(t, 0), max(s, 0)
        vars = AnnihilatorPoly.vars_for(t, s)
        G = AnnihilatorPoly(to_kpoly(g_ast, session, vars), t, s)
        session.uv_data = (u, v, G)

    return session


def _power_exponent(power, p, name):
    e = 0
    while power > 1 and power % p == 0:
        power //= p
        e += 1
    if power != 1 or e < 1:
        raise ParseError(f"tower exponent for {name!r} must be a power of p", 0)
    return e


def _parse_algebra(lines, session):
    items = [(k, v) for k, v, _ in lines]
    basis = None
    products = {}
    image_lines = {}
    for key, value in items:
        if key == "basis":
            basis = [b.strip() for b in value.split(",")]
            continue
        prod = _KEY_PRODUCT.match(key)
        img = _KEY_BOP_IMAGE.match(key)
        if prod:
            products[(prod.group(1), prod.group(2))] = value
        elif img:
            image_lines.setdefault(img.group(2), {})[img.group(1)] = value
        else:
            raise ParseError(f"unknown algebra key {key!r}", 0)
    if not basis or basis[0] != "1":
        raise ParseError("algebra basis must start with the unit, e.g. basis = 1, e", 0)
    index = {name: i for i, name in enumerate(basis)}
    dim = len(basis)
    table = {}
    for (a, b), value in products.items():
        if a not in index or b not in index:
            raise ParseError(f"unknown basis element in product {a}*{b}", 0)
        table[(index[a], index[b])] = _basis_combination(value, index, dim, session)
    # symmetrize unstated mirror products
    for (i, j), vec in list(table.items()):
        table.setdefault((j, i), vec)
    algebra = AlgebraB(session.spec.p, basis, table)
    images = {}
    for gen in session.spec.generators:
        per_gen = image_lines.get(gen, {})
        vec = []
        for name in basis[1:]:
            value = per_gen.get(name, "0")
            poly_val = session.eval_expr(value)
            if not isinstance(poly_val, RatFunc) or not poly_val.is_poly():
                raise ParseError(f"operator image d({name}, {gen}) must be polynomial", 0)
            vec.append(poly_val.num)
        images[gen] = tuple(vec)
    return algebra, BOperator(algebra, session.spec, images)


def _basis_combination(text, index, dim, session):
    ast = parse_expr(text)
    vec = _combo_walk(ast, index, dim, session.spec.p)
    return tuple(vec)


def _combo_walk(ast, index, dim, p):
    from .syntax import BinOp, Name, Num, PowOp

    if isinstance(ast, Num):
        out = [0] * dim
        out[0] = ast.value % p
        return out
    if isinstance(ast, Name):
        if ast.name not in index:
            raise ParseError(f"unknown basis element {ast.name!r}", ast.pos)
        out = [0] * dim
        out[index[ast.name]] = 1
        return out
    if isinstance(ast, BinOp) and ast.op == "+":
        left = _combo_walk(ast.left, index, dim, p)
        right = _combo_walk(ast.right, index, dim, p)
        return [(a + b) % p for a, b in zip(left, right)]
    if isinstance(ast, BinOp) and ast.op == "*" and isinstance(ast.left, Num):
        right = _combo_walk(ast.right, index, dim, p)
        return [(ast.left.value * c) % p for c in right]
    raise ParseError("algebra products must be F_p-combinations of basis elements", 0)


# ---------------------------------------------------------------------------
# command handlers; each returns (lines, witness)
# ---------------------------------------------------------------------------


def _parse_diffpoly(session, text) -> DiffPoly:
    value = session.eval_expr(text)
    if isinstance(value, DiffPoly):
        return value
    if isinstance(value, RatFunc):
        return DiffPoly.const(session.deriv, value)
    raise EvalError("expected a differential polynomial over the base field")


def _cmd_derive(session, args):
    value = session.eval_expr(args.expr)
    if isinstance(value, DiffPoly):
        return [format_value(delta(value))], None
    return [format_value(session.context().derive(value))], None


def _cmd_eval(session, args):
    f = _parse_diffpoly(session, args.poly)
    point = session.eval_expr(args.point)
    ctx = session.tower if isinstance(point, TowerElement) else session.deriv
    result = evaluate(f, JetTuple.auto(ctx, point))
    return [format_value(result)], None


def _cmd_order(session, args):
    return [str(order(_parse_diffpoly(session, args.poly)))], None


def _cmd_separant(session, args):
    return [format_value(separant(_parse_diffpoly(session, args.poly)))], None


def _ambient_kpoly(session, text, max_order):
    f = _parse_diffpoly(session, text)
    if not f.is_zero() and f.order() > max_order:
        raise EvalError("generators may only use x" + (" and x'" if max_order else ""))
    return f.as_kpoly(max_order)


def _cmd_prolong(session, args):
    gens = [_ambient_kpoly(session, g, 0) for g in args.gens.split(";")]
    result = prolong(IdealGens(("x",), gens), session.deriv)
    return [format_value(g) for g in result.gens], None


def _cmd_section_check(session, args):
    gens = [_ambient_kpoly(session, g, 1) for g in args.gens.split(";")]
    W = IdealGens(("x", "x'"), gens)
    point = session.eval_expr(args.point)
    ctx = session.tower if isinstance(point, TowerElement) else session.deriv
    return [format_value(check_section(W, [point], ctx))], None


def _cmd_combine(session, args):
    twist = session.eval_expr(args.twist)
    if not isinstance(twist, RatFunc):
        raise EvalError("the twist must be a base-field element")
    fs = [_parse_diffpoly(session, f) for f in args.polys]
    return [format_value(combine_system(fs, twist, args.power))], None


def _cmd_eliminate(session, args):
    f = _parse_diffpoly(session, args.f)
    g = _parse_diffpoly(session, args.g)
    report = pipeline_reduce(f, g)
    lines = [
        f"common = {format_value(report.common_factor)}",
        f"f_reduced = {format_value(report.f_reduced)}",
        f"p = {format_value(report.elimination.p)}",
        f"q = {format_value(report.elimination.q)}",
        f"gtilde = {format_value(report.elimination.gtilde)}",
        f"note: {report.note}",
    ]
    return lines, None


def _cmd_wood_solve(session, args):
    f = _parse_diffpoly(session, args.f)
    g = _parse_diffpoly(session, args.g)
    witness = wood_solve(f, g, SearchConfig(max_degree=args.max_degree))
    text = format_value(witness) if witness is not None else "none"
    return [f"witness = {text}"], text


def _cmd_lambda0(session, args):
    value = session.eval_expr(args.expr)
    if not isinstance(value, RatFunc):
        raise EvalError("l0 only applies to base-field elements")
    return [format_value(value.lambda0())], None


def _cmd_rewrite_l0(session, args):
    phi = to_formula(parse_formula(args.formula), session)
    branches = lambda0_rewrite(phi, session.deriv)
    if not branches:
        return ["false"], None
    return [str(b) for b in branches], None


def _cmd_compose_check(session, args):
    a = session.eval_expr(args.a)
    b = session.eval_expr(args.b)
    dd = compose(session.deriv, session.deriv)
    q2 = dd.q
    lhs = dd.derive(a * b)
    rhs = a ** q2 * dd.derive(b) + b ** q2 * dd.derive(a)
    return ["ok" if lhs == rhs else "violated"], None


def _cmd_strict_witness(session, args):
    value = session.eval_expr(args.expr)
    verdict = strictness_witness(session.deriv, value)
    return [verdict.kind], None


def _cmd_lindisj(session, args):
    elements = [session.eval_expr(e) for e in args.elements]
    ext = session.tower if session.tower is not None else session.deriv
    report = linear_disjointness_check(ext, elements, SubfieldSpec(args.subfield_power))
    lines = [f"dependent_over_K = {format_value(report.dependent_over_K)}"]
    if report.dependent_over_K:
        lines.append("k_witness = (" + ", ".join(format_value(c) for c in report.k_witness) + ")")
    lines.append(f"dependent_over_subfield = {format_value(report.dependent_over_subfield)}")
    if report.dependent_over_subfield:
        lines.append("subfield_witness = ("
                     + ", ".join(format_value(c) for c in report.subfield_witness) + ")")
    lines.append(f"all_constants = {format_value(report.all_constants)}")
    return lines, None


def _cmd_bop_validate(session, args):
    if session.algebra is None:
        raise EvalError("no [algebra] section in the session")
    return [str(validate_algebra(session.algebra))], None


def _cmd_bop_apply(session, args):
    if session.bop is None:
        raise EvalError("no [algebra] section in the session")
    value = session.eval_expr(args.expr)
    if not isinstance(value, RatFunc) or not value.is_poly():
        raise EvalError("operators apply to polynomials in the base generators")
    components = bop_apply(session.bop, value.num)
    return ["(" + ", ".join(format_value(c) for c in components) + ")"], None


def _require_uv(session):
    if session.uv_data is None:
        raise EvalError("no [primitive] section in the session")
    u, v, G = session.uv_data
    return UVContext(session.context(), u, v), G


def _cmd_primitive(session, args):
    ctx, G = _require_uv(session)
    if args.sub == "expand":
        return [format_value(twisted_jet_expand_cli(args.k, ctx))], None
    if args.sub == "identity":
        lam = session.eval_expr(args.lam)
        lhs, expected = partial_identity_check(G, args.i, ctx, lam)
        return [f"value = {format_value(lhs)}", f"expected = {format_value(expected)}"], None
    if args.sub == "recover":
        lam = session.eval_expr(args.lam)
        return [format_value(recover_power(G, args.i, lam, ctx))], None
    if args.sub == "find-lambda":
        lam = find_lambda(G, ctx, SearchConfig(max_degree=args.max_degree))
        text = format_value(lam) if lam is not None else "none"
        return [f"lambda = {text}"], text
    raise EvalError(f"unknown primitive sub-operation {args.sub!r}")


def twisted_jet_expand_cli(k, ctx):
    from .primitive_element import twisted_jet_expand

    return twisted_jet_expand(k, ctx)


def _selftest_lines(session, count, seed):
    rng = random.Random(seed)
    spec = session.spec
    d = session.deriv
    q = d.q
    failures = 0
    for _ in range(count):
        a = _random_ratfunc(rng, spec)
        b = _random_ratfunc(rng, spec)
        if d.derive(a * b) != a ** q * d.derive(b) + b ** q * d.derive(a):
            failures += 1
        if d.derive(a ** spec.p):
            failures += 1
    status = "ok" if failures == 0 else f"FAILED ({failures} mismatches)"
    return [f"selftest {status}: {count} cases, seed={seed}"], None


def _random_ratfunc(rng, spec):
    def poly():
        terms = {}
        for _ in range(rng.randint(0, 3)):
            exps = [0] * spec.k
            for _ in range(rng.randint(0, 2)):
                exps[rng.randrange(spec.k)] += 1
            terms[tuple(exps)] = rng.randrange(spec.p)
        return spec.poly(terms)

    num = poly()
    while True:
        den = poly()
        if not den.is_zero():
            break
    return RatFunc.make(num, den)


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="frobdiff",
        description="exact computations with derivations of Frobenius powers",
    )
    parser.add_argument("--session", help="session file with field and bindings")
    parser.add_argument("--p", type=int, default=2, help="characteristic (no session file)")
    parser.add_argument("--n", type=int, default=1, help="twist order (no session file)")
    parser.add_argument("--max-degree", type=int, default=3, dest="max_degree",
                        help="degree bound for witness searches")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_derive = sub.add_parser("derive", help="apply the derivation")
    p_derive.add_argument("expr")

    p_eval = sub.add_parser("eval", help="evaluate a differential polynomial at a point")
    p_eval.add_argument("poly")
    p_eval.add_argument("point")

    p_order = sub.add_parser("order", help="order of a differential polynomial")
    p_order.add_argument("poly")

    p_sep = sub.add_parser("separant", help="partial derivative in the highest jet")
    p_sep.add_argument("poly")

    p_prolong = sub.add_parser("prolong", help="twisted tangent bundle generators")
    p_prolong.add_argument("gens", help="';'-separated polynomials in x")

    p_section = sub.add_parser("section-check", help="does (a, d(a)) satisfy the ideal?")
    p_section.add_argument("gens", help="';'-separated polynomials in x, x'")
    p_section.add_argument("point")

    p_combine = sub.add_parser("combine", help="fold equations into one")
    p_combine.add_argument("--twist", required=True)
    p_combine.add_argument("--power", type=int, required=True, help="the exponent N")
    p_combine.add_argument("polys", nargs="+")

    p_elim = sub.add_parser("eliminate", help="drop the order of the inequation side")
    p_elim.add_argument("f")
    p_elim.add_argument("g")

    p_wood = sub.add_parser("wood-solve", help="search a witness of f = 0, g != 0")
    p_wood.add_argument("f")
    p_wood.add_argument("g")

    p_l0 = sub.add_parser("lambda0", help="inverse Frobenius on p-th powers")
    p_l0.add_argument("expr")

    p_rw = sub.add_parser("rewrite-l0", help="split a formula into derivation-only branches")
    p_rw.add_argument("formula")

    p_cc = sub.add_parser("compose-check", help="verify the doubled-twist product rule")
    p_cc.add_argument("a")
    p_cc.add_argument("b")

    p_sw = sub.add_parser("strict-witness", help="constant that is no p-th power?")
    p_sw.add_argument("expr")

    p_ld = sub.add_parser("lindisj", help="relation spaces over K and a subfield")
    p_ld.add_argument("--subfield-power", type=int, default=1, dest="subfield_power")
    p_ld.add_argument("elements", nargs="+")

    sub.add_parser("bop-validate", help="check the [algebra] section's table")

    p_ba = sub.add_parser("bop-apply", help="all operator components on a polynomial")
    p_ba.add_argument("expr")

    p_prim = sub.add_parser("primitive", help="jet expansion and power recovery")
    prim_sub = p_prim.add_subparsers(dest="sub", required=True)
    pp_expand = prim_sub.add_parser("expand")
    pp_expand.add_argument("k", type=int)
    pp_id = prim_sub.add_parser("identity")
    pp_id.add_argument("i", type=int)
    pp_id.add_argument("lam")
    pp_rec = prim_sub.add_parser("recover")
    pp_rec.add_argument("i", type=int)
    pp_rec.add_argument("lam")
    prim_sub.add_parser("find-lambda")

    p_st = sub.add_parser("selftest", help="randomized law checks (FROBDIFF_SEED)")
    p_st.add_argument("--count", type=int, default=50)

    return parser


_HANDLERS = {
    "derive": _cmd_derive,
    "eval": _cmd_eval,
    "order": _cmd_order,
    "separant": _cmd_separant,
    "prolong": _cmd_prolong,
    "section-check": _cmd_section_check,
    "combine": _cmd_combine,
    "eliminate": _cmd_eliminate,
    "wood-solve": _cmd_wood_solve,
    "lambda0": _cmd_lambda0,
    "rewrite-l0": _cmd_rewrite_l0,
    "compose-check": _cmd_compose_check,
    "strict-witness": _cmd_strict_witness,
    "lindisj": _cmd_lindisj,
    "bop-validate": _cmd_bop_validate,
    "bop-apply": _cmd_bop_apply,
    "primitive": _cmd_primitive,
}


def run_command(argv, out=None) -> int:
    """Parse argv, run one command, print to out; returns the exit code."""
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.session:
            session = load_session(args.session, n_default=args.n)
        else:
            session = Session.default(p=args.p, n=args.n)
        if args.command == "selftest":
            seed = int(os.environ.get("FROBDIFF_SEED", "0"))
            lines, witness = _selftest_lines(session, args.count, seed)
        else:
            lines, witness = _HANDLERS[args.command](session, args)
    except ParseError as exc:
        _emit_error(out, args, exc, code=2)
        return 2
    except FrobdiffError as exc:
        _emit_error(out, args, exc, code=1)
        return 1
    if getattr(args, "json", False):
        payload = {"status": "ok", "value": "\n".join(lines)}
        if witness is not None:
            payload["witness"] = witness
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
    return 0


def _emit_error(out, args, exc, code):
    if getattr(args, "json", False):
        payload = {"status": "error", "value": str(exc), "code": exc.code}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(f"error[{exc.code}]: {exc}\n")


def main() -> int:
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
