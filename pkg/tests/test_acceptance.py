"""Acceptance suite: one test per criterion, one pass line per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
Everything here is exact arithmetic; there are no tolerances to tune,
only zero-failure counts over fixed seeds and fixture-exact equalities.
"""

import io
import random
from pathlib import Path

import pytest

from frobdiff.base_field import FieldSpec, Poly, RatFunc
from frobdiff.boperator import AlgebraB, BOperator, bop_apply
from frobdiff.diffpoly import DiffPoly, JetTuple, evaluate
from frobdiff.errors import NotCoprime, NotSeparable
from frobdiff.frob_derivation import (
    FrobDerivation,
    SubfieldSpec,
    TowerSpec,
    compose,
    extend_separable,
    is_constant,
    linear_disjointness_check,
)
from frobdiff.geometry import IdealGens, check_section, prolong
from frobdiff.kpoly import KPoly
from frobdiff.primitive_element import (
    AnnihilatorPoly,
    UVContext,
    partial_identity_check,
    recover_power,
    twisted_jet_expand,
)
from frobdiff.reduction import gcd_eliminate, combine_system, wood_solve
from frobdiff.reduction import (
    Atom,
    Lambda0Formula,
    TConst,
    TDeriv,
    TLambda0,
    TMul,
    TPow,
    TVar,
    formula_eval,
    lambda0_rewrite,
)

from conftest import rand_poly, rand_ratfunc, rand_ratfunc_nonzero


def ok(n, label):
    print(f"[acceptance] criterion {n:2d} PASS: {label}")


def _rand_images(rng, spec):
    return {g: rand_ratfunc(rng, spec, 2) for g in spec.generators}


def test_criterion_01_twisted_leibniz():
    rng = random.Random(101)
    cases = 0
    for spec, count in ((FieldSpec(2, ["t"]), 500), (FieldSpec(3, ["s", "t"]), 500)):
        d = FrobDerivation(1, spec, _rand_images(rng, spec))
        q = d.q
        for _ in range(count):
            a = rand_ratfunc(rng, spec, 2)
            b = rand_ratfunc(rng, spec, 2)
            assert d.derive(a * b) == a ** q * d.derive(b) + b ** q * d.derive(a)
            cases += 1
    assert cases == 1000
    ok(1, "twisted product rule, 1000 random pairs, exact, zero failures")


def test_criterion_02_pth_powers_and_higher_leibniz():
    rng = random.Random(102)
    cases = 0
    for spec, count in ((FieldSpec(2, ["t"]), 200), (FieldSpec(3, ["t"]), 100)):
        d = FrobDerivation(1, spec, _rand_images(rng, spec))
        for _ in range(count):
            a = rand_ratfunc(rng, spec, 2)
            b = rand_ratfunc(rng, spec, 2)
            assert not d.derive(a ** spec.p)
            da, db, dab = a, b, a * b
            for k in (1, 2, 3):
                da, db, dab = d.derive(da), d.derive(db), d.derive(dab)
                qk = d.q ** k
                assert dab == a ** qk * db + b ** qk * da
            cases += 1
    assert cases == 300
    ok(2, "p-th powers killed and two-term rule for k <= 3, 300 cases")


def test_criterion_03_composition_law():
    spec = FieldSpec(2, ["t"])
    t = spec.gen("t")
    d = FrobDerivation(1, spec, {"t": t})
    dd = compose(d, d)
    q2 = dd.q
    rng = random.Random(103)
    for _ in range(300):
        a = rand_ratfunc(rng, spec, 2)
        b = rand_ratfunc(rng, spec, 2)
        assert dd.derive(a * b) == a ** q2 * dd.derive(b) + b ** q2 * dd.derive(a)
    shift = FrobDerivation(1, spec, {"t": 1})
    shift2 = compose(shift, shift)
    assert not is_constant(shift, t)
    assert is_constant(shift2, t)
    ok(3, "composed map obeys the doubled-twist rule; its constants grow")


@pytest.fixture
def example_tower():
    base = FieldSpec(2, ["X", "Y", "l", "m"])
    d = FrobDerivation(1, base, {"X": 0, "Y": 0, "l": base.gen("Y"), "m": base.gen("X")})
    return TowerSpec(d, [("x", 1, base.gen("X")), ("y", 1, base.gen("Y"))], {"x": 0, "y": 0})


def test_criterion_04_example_fixture(example_tower):
    tw = example_tower
    base = tw.field
    x, y = tw.gen("x"), tw.gen("y")
    l, m = base.gen("l"), base.gen("m")
    w = l * x + m * y
    assert tw.derive(w) == 0
    report = linear_disjointness_check(tw, [x, y, w], SubfieldSpec(1))
    assert report.dependent_over_K
    assert report.k_witness == (l, m, base.one())
    assert not report.dependent_over_subfield
    assert report.all_constants
    # the subfield refinement is the full 64-dimensional coordinate space
    assert tw.dim * base.p ** base.k == 64
    ok(4, "tower fixture: derivative 0, witness (l, m, 1), independent over K^p")


def _geo_field():
    spec = FieldSpec(2, ["s", "t"])
    return spec, FrobDerivation(1, spec, {"s": 0, "t": 1})


def test_criterion_05_prolongation_counterexample():
    spec, d = _geo_field()
    s, t = spec.gen("s"), spec.gen("t")
    V = IdealGens(("x",), [KPoly.build(spec, ("x",), {(2,): spec.one(), (0,): s})])
    W = prolong(V, d)
    assert W.gens[1].is_zero()  # the bundle is the full vertical line

    V2 = IdealGens(("x",), [KPoly.build(spec, ("x",), {(1,): spec.one(), (0,): t})])
    assert check_section(prolong(V2, d), [t], d)

    # no polynomial of degree <= 4 in F_2[s, t] hits Z(x^2 + s, x')
    monos = [e for e in _monomials(2, 4)]
    assert len(monos) == 15
    found = 0
    checked = 0
    for mask in range(2 ** len(monos)):
        terms = {}
        for i, e in enumerate(monos):
            if mask >> i & 1:
                terms[e] = 1
        a = Poly(spec, terms)
        checked += 1
        # a^2 computed by the exact Frobenius shortcut
        if a.frobenius(1) == spec.poly_gen("s") and d.derive(RatFunc.make(a, spec._poly_one)) == 0:
            found += 1
    assert checked == 2 ** 15 and found == 0
    # spot check the fast squaring path against the full section evaluator
    rng = random.Random(105)
    gens2 = ("x", "x'")
    g1 = KPoly.build(spec, gens2, {(2, 0): spec.one(), (0, 0): s})
    g2 = KPoly.var(spec, gens2, "x'")
    Wfull = IdealGens(gens2, [g1, g2])
    for _ in range(50):
        mask = rng.randrange(2 ** len(monos))
        terms = {e: 1 for i, e in enumerate(monos) if mask >> i & 1}
        a = RatFunc.make(Poly(spec, terms), spec._poly_one)
        fast = (a.num.frobenius(1) == spec.poly_gen("s")
                and a.den.is_one() and d.derive(a) == 0)
        assert fast == check_section(Wfull, [a], d)
    ok(5, "vertical bundle over the counterexample; no witness up to degree 4")


def _monomials(k, deg):
    out = []

    def gen(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left + 1):
            gen(prefix + [a], left - a, slots - 1)

    for d in range(deg + 1):
        gen([], d, k)
    return out


def test_criterion_06_section_property():
    spec, d = _geo_field()
    rng = random.Random(106)
    for _ in range(100):
        m = rng.choice([1, 2])
        vars = tuple(f"x{i}" for i in range(m)) if m > 1 else ("x",)
        terms = {}
        for _ in range(rng.randint(1, 3)):
            e = tuple(rng.randrange(3) for _ in range(m))
            terms[e] = rand_ratfunc(rng, spec, 1)
        g = KPoly.build(spec, vars, terms)
        point = [rand_ratfunc(rng, spec, 1) for _ in range(m)]
        f = g - KPoly.const(spec, vars, g.evaluate(point))
        W = prolong(IdealGens(vars, [f]), d)
        assert check_section(W, point, d)
    ok(6, "100 hypersurfaces through constructed points accept their sections")


def test_criterion_07_elimination():
    spec = FieldSpec(2, ["t"])
    d = FrobDerivation(1, spec, {"t": 1})
    t = spec.gen("t")
    x, x1, x2 = (DiffPoly.jet(d, k) for k in range(3))
    fixture = gcd_eliminate(x1 * x1 + t, x1 + x)
    assert fixture.gtilde == x * x + t
    assert fixture.verify(x1 * x1 + t, x1 + x)

    rng = random.Random(107)
    done = 0
    while done < 100:
        m = rng.choice([1, 2])
        lead = (x1, x2)[m - 1]
        f = lead ** rng.randint(1, 3)
        lower = (x, x1)[: m]
        for _ in range(2):
            piece = lower[rng.randrange(len(lower))] ** rng.randint(0, 2)
            f = f + piece * rand_ratfunc(rng, spec, 1)
        if f.is_zero() or f.order() != m:
            continue
        g = lead ** rng.randint(0, 1) * rand_ratfunc_nonzero(rng, spec, 1)
        g = g + lower[0] ** rng.randint(0, 2) * rand_ratfunc(rng, spec, 1)
        if g.is_zero() or g.order() > m:
            continue
        try:
            result = gcd_eliminate(f, g)
        except NotCoprime:
            continue
        assert result.verify(f, g)
        assert result.gtilde.order() < m
        done += 1
    ok(7, "fixture elimination plus 100 random coprime pairs, identity exact")


def test_criterion_08_combine_zero_sets(example_tower):
    spec = FieldSpec(2, ["t"])
    d = FrobDerivation(1, spec, {"t": 1})
    t = spec.gen("t")
    x, x1 = DiffPoly.jet(d, 0), DiffPoly.jet(d, 1)
    rng = random.Random(108)
    checked = 0
    for _ in range(60):
        a = rand_ratfunc(rng, spec, 1)
        fs = [x - a, x1 - d.derive(a), (x - a) * (x + 1)]
        combined = combine_system(fs, t, 2)
        for point in (a, rand_ratfunc(rng, spec, 1)):
            jets = JetTuple.auto(d, point)
            all_vanish = all(evaluate(f, jets) == 0 for f in fs)
            assert (evaluate(combined, jets) == 0) == all_vanish
            checked += 1

    tw = example_tower
    base = tw.field
    lam = base.gen("l")  # transcendental over the squares of the tower field
    xb = DiffPoly.jet(tw.deriv, 0)
    x1b = DiffPoly.jet(tw.deriv, 1)
    for _ in range(80):
        coeff = rand_ratfunc_nonzero(rng, base, 1)
        fs = [xb * coeff, x1b + coeff]
        combined = combine_system(fs, lam, 2)
        if rng.random() < 0.5:
            point = tw.gen("x") * coeff + tw.gen("y")
        else:
            point = tw.promote(rand_ratfunc(rng, base, 1))
        jets = JetTuple.auto(tw, point)
        all_vanish = all(not evaluate(f, jets) for f in fs)
        assert (not evaluate(combined, jets)) == all_vanish
        checked += 1
    assert checked == 200
    ok(8, "combined equation has the same zero set at 200 sampled points")


def test_criterion_09_lambda0_semantics_and_rewriting():
    spec = FieldSpec(2, ["t"])
    d = FrobDerivation(1, spec, {"t": 1})
    t = spec.gen("t")
    rng = random.Random(109)
    for _ in range(200):
        a = rand_ratfunc(rng, spec, 2)
        assert (a ** 2).lambda0() == a
        b = a * t if a.pth_root() is not None else a
        if b.pth_root() is None:
            assert b.lambda0() == 0

    formulas = [
        Lambda0Formula([Atom(TMul(TLambda0(TVar()), TConst(t)), TConst(spec.one()))]),
        Lambda0Formula([Atom(TLambda0(TVar()), TConst(spec.zero()))]),
        Lambda0Formula([Atom(TLambda0(TMul(TVar(), TVar())), TVar())]),
        Lambda0Formula([Atom(TPow(TLambda0(TVar()), 2), TVar()),
                        Atom(TDeriv(TVar()), TConst(spec.zero()), negated=True)]),
    ]
    points = [rand_ratfunc(rng, spec, 2) for _ in range(50)]
    checked = 0
    for phi in formulas:
        branches = lambda0_rewrite(phi, d)
        for a in points:
            expected = formula_eval(phi, a, d)
            hits = [formula_eval(b, a, d) for b in branches]
            for hit in hits:
                if hit:
                    assert expected
            assert any(hits) == expected
            checked += 1
    assert checked == 200
    ok(9, "lambda0 semantics and branch rewriting sound and complete, 200 points")


def test_criterion_10_wood_fixtures():
    spec = FieldSpec(2, ["t"])
    d = FrobDerivation(1, spec, {"t": 1})
    t = spec.gen("t")
    x, x1 = DiffPoly.jet(d, 0), DiffPoly.jet(d, 1)
    fixtures = [
        (x1, x, spec.one()),
        (x1 + x * x, DiffPoly.one(d), spec.zero()),
        (x1 + 1, DiffPoly.one(d), t),
    ]
    for f, g, expected in fixtures:
        seen = set()
        for _ in range(5):
            witness = wood_solve(f, g)
            assert witness == expected
            jets = JetTuple.auto(d, witness)
            assert evaluate(f, jets) == 0 and evaluate(g, jets) != 0
            seen.add(str(witness))
        assert len(seen) == 1
    ok(10, "three witness fixtures found, re-verified, stable over 5 runs")


def test_criterion_11_separable_extension():
    spec = FieldSpec(2, ["t"])
    d = FrobDerivation(1, spec, {"t": 1})
    t = spec.gen("t")
    f = KPoly.build(spec, ("Z",), {(2,): spec.one(), (1,): spec.one(), (0,): t})
    ext = extend_separable(d, f)
    assert ext.d_alpha == ext.one()
    assert ext.derive(ext.from_poly(f)) == ext.zero()
    with pytest.raises(NotSeparable):
        extend_separable(d, KPoly.build(spec, ("Z",), {(2,): spec.one(), (0,): t}))
    ok(11, "root image is 1 on the separable fixture; inseparable input rejected")


def test_criterion_12_boperators():
    spec = FieldSpec(2, ["t"])
    rng = random.Random(112)
    dual = BOperator(AlgebraB(2, ("1", "e"), {(1, 1): (0, 0)}), spec, {"t": (1,)})
    prod = BOperator(AlgebraB(2, ("1", "b"), {(1, 1): (0, 1)}), spec, {"t": (1,)})
    for _ in range(200):
        r = rand_poly(rng, spec, 3)
        s = rand_poly(rng, spec, 3)
        d1 = lambda h: bop_apply(dual, h)[1]
        assert d1(r * s) == r * d1(s) + s * d1(r)
        sigma = lambda h: h + bop_apply(prod, h)[1]
        assert sigma(r * s) == sigma(r) * sigma(s)
    assert type(dual) is type(prod) is BOperator  # one code path, two algebras
    ok(12, "Leibniz for dual numbers, endomorphism for the product algebra, 200 pairs")


def test_criterion_13_primitive_kit():
    spec = FieldSpec(2, ["t"])
    t = spec.gen("t")
    shift = FrobDerivation(1, spec, {"t": 1})
    scale = FrobDerivation(1, spec, {"t": t})
    rng = random.Random(113)
    checked = 0
    while checked < 100:
        d = (shift, scale)[checked % 2]
        u = rand_ratfunc(rng, spec, 1)
        v = rand_ratfunc(rng, spec, 1)
        lam = rand_ratfunc(rng, spec, 1)
        ctx = UVContext(d, u, v)
        jets_w = JetTuple.auto(d, u + lam * v)
        jets_l = JetTuple.auto(d, lam)
        for k in range(4):
            e = twisted_jet_expand(k, ctx)
            assert e.evaluate([jets_l.get(i) for i in range(k + 1)]) == jets_w.get(k)
        checked += 1

    vars00 = AnnihilatorPoly.vars_for(0, 0)
    G1 = AnnihilatorPoly(KPoly.build(spec, vars00, {
        (0, 1): spec.one(), (1, 0): -spec.one(), (0, 0): -t}), 0, 0)
    ctx1 = UVContext(shift, t, spec.one())
    assert recover_power(G1, 0, spec.zero(), ctx1) == spec.one()
    u2 = t * t
    G2 = AnnihilatorPoly(KPoly.build(spec, vars00, {
        (0, 1): spec.one(), (1, 0): -t, (0, 0): -u2}), 0, 0)
    ctx2 = UVContext(shift, u2, t)
    assert recover_power(G2, 0, spec.one(), ctx2) == t

    for _ in range(30):
        u = rand_ratfunc(rng, spec, 1)
        v = rand_ratfunc(rng, spec, 1)
        lam = rand_ratfunc(rng, spec, 1)
        G = AnnihilatorPoly(KPoly.build(spec, vars00, {
            (0, 1): spec.one(), (1, 0): -v, (0, 0): -u}), 0, 0)
        ctx = UVContext(shift, u, v)
        lhs, expected = partial_identity_check(G, 0, ctx, lam)
        assert lhs == expected == 0
    ok(13, "jet expansion matches direct iteration; powers recovered exactly")


def test_criterion_14_cli_goldens_and_roundtrip():
    from test_cli import TRANSCRIPT_COMMANDS, render_transcript, roundtrip_corpus

    golden = (Path(__file__).parent / "golden" / "transcript.txt").read_bytes()
    first = render_transcript(TRANSCRIPT_COMMANDS)
    second = render_transcript(TRANSCRIPT_COMMANDS)
    assert first == second
    assert first.encode() == golden
    assert len(TRANSCRIPT_COMMANDS) == 25

    count = roundtrip_corpus(500)
    assert count == 500
    ok(14, "25 transcripts byte-identical; 500 expression round-trips")
