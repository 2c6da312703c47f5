"""Twisted Leibniz law, towers, composition, separable extensions, disjointness."""

import random

import pytest

from frobdiff.base_field import FieldSpec, RatFunc
from frobdiff.errors import BasisViolation, FieldMismatch, NotSeparable
from frobdiff.frob_derivation import (
    FrobDerivation,
    SubfieldSpec,
    TowerSpec,
    compose,
    derive_tower,
    extend_separable,
    is_constant,
    linear_disjointness_check,
    strictness_witness,
)
from frobdiff.kpoly import KPoly

from conftest import rand_ratfunc, rand_ratfunc_nonzero, rand_poly_nonzero


@pytest.fixture
def d_shift(f2t):
    # the Frobenius-composed d/dt: d(t) = 1 on F_2(t), twist 1
    return FrobDerivation(1, f2t, {"t": f2t.one()})


@pytest.fixture
def example_tower():
    """The non-strict four-generator fixture with two inseparable roots."""
    base = FieldSpec(2, ["X", "Y", "l", "m"])
    d = FrobDerivation(1, base, {
        "X": 0, "Y": 0, "l": base.gen("Y"), "m": base.gen("X")})
    tower = TowerSpec(
        d,
        [("x", 1, base.gen("X")), ("y", 1, base.gen("Y"))],
        {"x": 0, "y": 0},
    )
    return tower


def test_derive_monomial(d_shift, f2t):
    t = f2t.gen("t")
    assert d_shift.derive(t ** 3) == t ** 4
    assert d_shift.derive(t ** 2) == 0


def test_derive_fraction(d_shift, f2t):
    t = f2t.gen("t")
    assert d_shift.derive(1 / t) == 1 / t ** 4
    # cross-check d(t * 1/t) = d(1) = 0 by the product rule
    q = d_shift.q
    lhs = t ** q * d_shift.derive(1 / t) + (1 / t) ** q * d_shift.derive(t)
    assert lhs == 0


def test_twisted_leibniz_randomized(f3st):
    rng = random.Random(20)
    images = {"s": rand_ratfunc(rng, f3st), "t": rand_ratfunc(rng, f3st)}
    d = FrobDerivation(1, f3st, images)
    q = d.q
    for _ in range(40):
        a = rand_ratfunc(rng, f3st)
        b = rand_ratfunc(rng, f3st)
        assert d.derive(a * b) == a ** q * d.derive(b) + b ** q * d.derive(a)


def test_kills_pth_powers(f3st):
    rng = random.Random(21)
    d = FrobDerivation(1, f3st, {"s": f3st.gen("t"), "t": f3st.one()})
    for _ in range(30):
        a = rand_ratfunc(rng, f3st)
        assert d.derive(a ** f3st.p) == 0


def test_representative_invariance(f2t, d_shift):
    rng = random.Random(22)
    for _ in range(30):
        a = rand_ratfunc_nonzero(rng, f2t)
        c = rand_poly_nonzero(rng, f2t)
        direct = d_shift.derive_fraction(a.num, a.den)
        scaled = d_shift.derive_fraction(a.num * c, a.den * c)
        assert direct == scaled == d_shift.derive(a)


def test_two_term_higher_leibniz(f2t, d_shift):
    rng = random.Random(23)
    p = f2t.p
    for _ in range(15):
        a = rand_ratfunc(rng, f2t)
        b = rand_ratfunc(rng, f2t)
        da, db, dab = a, b, a * b
        for k in range(1, 4):
            da, db, dab = d_shift.derive(da), d_shift.derive(db), d_shift.derive(dab)
            qk = d_shift.q ** k
            assert dab == a ** qk * db + b ** qk * da


def test_compose_examples(f2t):
    t = f2t.gen("t")
    d = FrobDerivation(1, f2t, {"t": t})
    dd = compose(d, d)
    assert dd.derive(t) == t
    assert dd.derive(t ** 3) == t ** 9
    assert dd.n == 2 and dd.q == 4


def test_compose_zero_on_polynomials(f2t, d_shift):
    dd = compose(d_shift, d_shift)
    t = f2t.gen("t")
    for k in range(8):
        assert dd.derive(t ** k) == 0


def test_compose_satisfies_higher_twist_law(f2t):
    rng = random.Random(24)
    t = f2t.gen("t")
    d = FrobDerivation(1, f2t, {"t": t})
    dd = compose(d, d)
    q2 = dd.q
    for _ in range(25):
        a = rand_ratfunc(rng, f2t)
        b = rand_ratfunc(rng, f2t)
        assert dd.derive(a * b) == a ** q2 * dd.derive(b) + b ** q2 * dd.derive(a)


def test_compose_field_mismatch(f2t, f3st):
    d1 = FrobDerivation(1, f2t, {"t": 1})
    d2 = FrobDerivation(1, f3st, {"s": 0, "t": 1})
    with pytest.raises(FieldMismatch):
        compose(d1, d2)


def test_constants_of_square_strictly_bigger(f2t, d_shift):
    # the square of the shift derivation gains t as a constant
    dd = compose(d_shift, d_shift)
    t = f2t.gen("t")
    assert not is_constant(d_shift, t)
    assert is_constant(dd, t)


def test_is_constant_examples(d_shift, f2t):
    t = f2t.gen("t")
    assert is_constant(d_shift, t * t)
    assert not is_constant(d_shift, t)
    fst = FieldSpec(2, ["s", "t"])
    d = FrobDerivation(1, fst, {"s": 0, "t": 1})
    assert is_constant(d, fst.gen("s"))


def test_strictness_witness():
    fst = FieldSpec(2, ["s", "t"])
    d = FrobDerivation(1, fst, {"s": 0, "t": 1})
    assert strictness_witness(d, fst.gen("s")).kind == "NonStrictWitness"
    t = fst.gen("t")
    assert strictness_witness(d, t * t).kind == "ConsistentWithStrict"
    assert strictness_witness(d, t).kind == "ConsistentWithStrict"


def test_tower_example_fixture(example_tower):
    tw = example_tower
    base = tw.field
    x, y = tw.gen("x"), tw.gen("y")
    l, m = base.gen("l"), base.gen("m")
    w = l * x + m * y
    assert tw.derive(w) == 0
    assert tw.derive(l) == tw.promote(base.gen("Y"))
    assert tw.derive(x) == 0


def test_tower_relation_reduction(example_tower):
    tw = example_tower
    x = tw.gen("x")
    X = tw.field.gen("X")
    assert x * x == tw.promote(X)
    assert (x + 1) * (x + 1) == tw.promote(X + 1)


def test_tower_inverse(example_tower):
    tw = example_tower
    x, y = tw.gen("x"), tw.gen("y")
    z = x + y + 1
    assert z * z.inverse() == tw.one()
    with pytest.raises(Exception):
        tw.zero().inverse()


def test_tower_rejects_pth_power_value(f2t):
    d = FrobDerivation(1, f2t, {"t": 1})
    t2 = f2t.gen("t") ** 2
    with pytest.raises(BasisViolation):
        TowerSpec(d, [("x", 1, t2)], {"x": 0})


def test_tower_twisted_leibniz_randomized(example_tower):
    tw = example_tower
    rng = random.Random(25)
    base = tw.field
    q = tw.q

    def rand_elem():
        coeffs = {}
        for _ in range(rng.randint(1, 3)):
            e = (rng.randrange(2), rng.randrange(2))
            coeffs[e] = rand_ratfunc(rng, base, 1)
        return tw.element(coeffs)

    for _ in range(15):
        a, b = rand_elem(), rand_elem()
        assert tw.derive(a * b) == a.frobenius(1) * tw.derive(b) + b.frobenius(1) * tw.derive(a)


def test_extend_separable_fixture(f2t, d_shift):
    t = f2t.gen("t")
    Z = ("Z",)
    f = KPoly.build(f2t, Z, {(2,): f2t.one(), (1,): f2t.one(), (0,): t})
    ext = extend_separable(d_shift, f)
    assert ext.d_alpha == ext.one()
    # symbolic check: the derivation kills f(alpha)
    alpha = ext.alpha()
    assert ext.derive(alpha ** 2 + alpha + ext.promote(t)) == ext.zero()
    assert ext.derive(ext.from_poly(f)) == ext.zero()


def test_extend_separable_linear(f2t, d_shift):
    t = f2t.gen("t")
    f = KPoly.build(f2t, ("Z",), {(1,): f2t.one(), (0,): t ** 3})
    ext = extend_separable(d_shift, f)
    # Z - c forces alpha = c (here c = t^3, sign irrelevant in char 2)
    assert ext.d_alpha == ext.promote(d_shift.derive(t ** 3))


def test_extend_separable_rejects_inseparable(f2t, d_shift):
    t = f2t.gen("t")
    f = KPoly.build(f2t, ("Z",), {(2,): f2t.one(), (0,): t})
    with pytest.raises(NotSeparable):
        extend_separable(d_shift, f)


def test_linear_disjointness_example(example_tower):
    tw = example_tower
    base = tw.field
    x, y = tw.gen("x"), tw.gen("y")
    l, m = base.gen("l"), base.gen("m")
    report = linear_disjointness_check(tw, [x, y, l * x + m * y], SubfieldSpec(1))
    assert report.dependent_over_K
    assert report.k_witness == (l, m, base.one())
    assert not report.dependent_over_subfield
    assert report.all_constants
    # witness relation evaluates exactly to zero
    elems = [x, y, l * x + m * y]
    total = tw.zero()
    for c, z in zip(report.k_witness, elems):
        total = total + z * c
    assert total == 0


def test_linear_disjointness_trivial_cases(f2t, d_shift):
    one, t = f2t.one(), f2t.gen("t")
    report = linear_disjointness_check(d_shift, [one, t], SubfieldSpec(0))
    assert report.dependent_over_K
    single = linear_disjointness_check(d_shift, [t], SubfieldSpec(1))
    assert not single.dependent_over_K
    assert not single.dependent_over_subfield


def test_linear_disjointness_separable_instance(f2t, d_shift):
    # over the strict base, constants of the extension that are K-dependent
    # are already dependent over K^p
    t = f2t.gen("t")
    f = KPoly.build(f2t, ("Z",), {(2,): f2t.one(), (1,): f2t.one(), (0,): t})
    ext = extend_separable(d_shift, f)
    alpha = ext.alpha()
    c1 = alpha * alpha
    c2 = ext.promote(t * t) * c1
    assert ext.derive(c1) == ext.zero() and ext.derive(c2) == ext.zero()
    report = linear_disjointness_check(ext, [c1, c2], SubfieldSpec(1))
    assert report.dependent_over_K
    assert report.dependent_over_subfield
    assert report.all_constants
    total = ext.zero()
    for c, z in zip(report.subfield_witness, [c1, c2]):
        total = total + z * c
    assert total == ext.zero()
