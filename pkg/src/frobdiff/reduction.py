"""Combination, elimination and witness search for systems f = 0, g != 0.

The pieces:

* combine_system folds a conjunction f_1 = ... = f_m = 0 into a single
  equation sum_i twist^(i-1) * f_i^(p^N), valid whenever the twist stays
  outside the p-th powers of the ambient field and m < p^N.
* coprime_reduce / gcd_eliminate treat differential polynomials as
  univariate in the leader (the highest jet of f) over the rational
  function field in the lower jets.  The extended Euclidean pass is run
  fraction-free, so the cofactors it returns are genuine differential
  polynomials and the identity p*f + q*g = gtilde holds exactly, with
  gtilde of strictly smaller order.
* lambda0_rewrite splits a formula with inverse-Frobenius terms into
  derivation-only branches: for each innermost lambda0(b) either d(b) = 0
  holds and the enclosing atoms can be raised to the p-th power to clear
  the lambda0, or d(b) != 0 holds and the occurrence collapses to zero.
  Each branch implies the original formula; the disjunction of branches
  is equivalent to it over strict fields (where constants are exactly the
  p-th powers) and only there.
* wood_solve enumerates K-rational witnesses of f = 0, g != 0 in a fixed
  deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_field import FieldSpec, Poly, RatFunc, poly_gcd
from .diffpoly import DiffPoly, JetTuple, evaluate, separant
from .errors import (
    BadExponent,
    BadTwist,
    Exhausted,
    LeaderMismatch,
    NotCoprime,
    ShapeViolation,
)
from .kpoly import KPoly, kpoly_divexact, kpoly_gcd


class SystemFG:
    """The pair (f, g) of a Wood-shaped system f = 0, g != 0."""

    __slots__ = ("f", "g")

    def __init__(self, f: DiffPoly, g: DiffPoly):
        if f.is_zero():
            raise ShapeViolation("the equation side f must be nonzero")
        self.f = f
        self.g = g


# ---------------------------------------------------------------------------
# conjunction combination
# ---------------------------------------------------------------------------


def combine_system(fs, twist: RatFunc, N: int) -> DiffPoly:
    """sum_i twist^(i-1) * f_i^(p^N); requires len(fs) < p^N and twist not a p-th power."""
    fs = list(fs)
    if not fs:
        raise BadExponent("need at least one equation")
    deriv = fs[0].deriv
    p = deriv.p
    if twist.pth_root() is not None:
        raise BadTwist("the twist element is a p-th power")
    if len(fs) >= p ** N:
        raise BadExponent(f"{len(fs)} equations need p^N > {len(fs)}")
    total = DiffPoly.zero(deriv)
    scale = deriv.field.one()
    for f in fs:
        total = total + f.frob_power(N) * scale
        scale = scale * twist
    return total


# ---------------------------------------------------------------------------
# univariate-in-the-leader views
# ---------------------------------------------------------------------------


def _leader_view(f: DiffPoly, m: int) -> dict:
    """Split f by the degree of jet m; coefficients are DiffPolys of order < m."""
    out = {}
    for exps, c in f.terms.items():
        if len(exps) == m + 1:
            d = exps[m]
            rest = exps[:m]
        else:
            d = 0
            rest = exps
        bucket = out.setdefault(d, {})
        acc = bucket.get(rest)
        acc = c if acc is None else acc + c
        if acc:
            bucket[rest] = acc
        else:
            bucket.pop(rest, None)
    return {d: DiffPoly(f.deriv, terms) for d, terms in out.items() if terms}


def _from_leader_view(deriv, view: dict, m: int) -> DiffPoly:
    total = DiffPoly.zero(deriv)
    lead = DiffPoly.jet(deriv, m)
    for d, coeff in view.items():
        total = total + coeff * lead ** d
    return total


def _view_deg(view) -> int:
    return max(view) if view else -1


def _view_scale(view, c: DiffPoly):
    out = {}
    for d, v in view.items():
        prod = v * c
        if prod:
            out[d] = prod
    return out


def _view_sub(a, b):
    out = dict(a)
    for d, v in b.items():
        acc = out.get(d)
        acc = -v if acc is None else acc - v
        if acc:
            out[d] = acc
        else:
            out.pop(d, None)
    return out


def _view_shift(view, k):
    return {d + k: v for d, v in view.items()}


def coprime_reduce(f: DiffPoly, g: DiffPoly, m: int):
    """Divide f by its common leader-variable factor with g.

    Both are read as univariate polynomials in jet m over the rational
    function field in the lower jets; the returned common factor is the
    primitive part of their gcd, normalized monic under graded lex, so it
    lies in the differential polynomial ring.
    """
    if f.order() != m:
        raise LeaderMismatch(f"f has order {f.order()}, expected {m}")
    if not g.is_zero() and g.order() > m:
        raise LeaderMismatch("g has higher order than f")
    kf = f.as_kpoly(m)
    kg = g.as_kpoly(m)
    common = kpoly_gcd(kf, kg)
    if common.degree_in(m) == 0:
        return f, DiffPoly.one(f.deriv)
    # keep only the leader-variable part of the gcd: split off the content
    view = _kview(common, m)
    content = None
    for coeff in view.values():
        content = coeff if content is None else kpoly_gcd(content, coeff)
    primitive = kpoly_divexact(common, content.extend_vars(common.vars))
    lead = primitive.terms[max(primitive.terms, key=lambda e: (e[m], e))]
    primitive = primitive * (f.deriv.field.one() / lead)
    reduced = kpoly_divexact(kf, primitive)
    return (
        DiffPoly.from_kpoly(f.deriv, reduced),
        DiffPoly.from_kpoly(f.deriv, primitive),
    )


def _kview(poly: KPoly, m: int) -> dict:
    """KPoly in jets 0..m split by the exponent of variable m."""
    out = {}
    lower_vars = poly.vars[:m]
    for e, c in poly.terms.items():
        out.setdefault(e[m], {})[e[:m]] = c
    return {d: KPoly(poly.ring, lower_vars, terms) for d, terms in out.items()}


@dataclass
class EliminationResult:
    """Cofactors p, q and the order-dropped combination gtilde = p*f + q*g."""

    p: DiffPoly
    q: DiffPoly
    gtilde: DiffPoly

    def verify(self, f: DiffPoly, g: DiffPoly) -> bool:
        return self.p * f + self.q * g == self.gtilde


def gcd_eliminate(f: DiffPoly, g: DiffPoly) -> EliminationResult:
    """Fraction-free extended Euclid in the leader of f.

    Preconditions: f and g are coprime as univariate polynomials in the
    leader, and order(g) <= order(f).  The result satisfies
    p*f + q*g = gtilde with order(gtilde) < order(f).
    """
    if g.is_zero():
        raise NotCoprime("g = 0 shares every factor of f")
    m = f.order()
    if m < 0:
        # nonzero constant f: 1*f + 0*g = f already has no leader
        return EliminationResult(DiffPoly.one(f.deriv), DiffPoly.zero(f.deriv), f)
    if g.order() > m:
        raise LeaderMismatch("g has higher order than f")
    deriv = f.deriv
    one = {0: DiffPoly.one(deriv)}
    zero = {}
    r0, p0, q0 = _leader_view(f, m), dict(one), dict(zero)
    r1, p1, q1 = _leader_view(g, m), dict(zero), dict(one)
    while True:
        if _view_deg(r1) <= 0:
            break
        if _view_deg(r0) < _view_deg(r1):
            r0, p0, q0, r1, p1, q1 = r1, p1, q1, r0, p0, q0
            continue
        # one full pseudo-division pass of r0 by r1
        lc = r1[_view_deg(r1)]
        while _view_deg(r0) >= _view_deg(r1):
            d0 = _view_deg(r0)
            top = r0[d0]
            shift = d0 - _view_deg(r1)
            r0 = _view_sub(_view_scale(r0, lc), _view_shift(_view_scale(r1, top), shift))
            p0 = _view_sub(_view_scale(p0, lc), _view_shift(_view_scale(p1, top), shift))
            q0 = _view_sub(_view_scale(q0, lc), _view_shift(_view_scale(q1, top), shift))
            if not r0:
                raise NotCoprime("f and g share a leader-variable factor")
        r0, p0, q0, r1, p1, q1 = r1, p1, q1, r0, p0, q0
    if not r1:
        raise NotCoprime("f and g share a leader-variable factor")
    gtilde = r1[0]
    return EliminationResult(
        _from_leader_view(deriv, p1, m),
        _from_leader_view(deriv, q1, m),
        gtilde,
    )


@dataclass
class PipelineReport:
    """coprime_reduce followed by gcd_eliminate, with the logical note."""

    f_reduced: DiffPoly
    common_factor: DiffPoly
    elimination: EliminationResult
    note: str = ("any solution of f_reduced = 0, gtilde != 0 "
                 "also solves f_reduced = 0, g != 0")


def pipeline_reduce(f: DiffPoly, g: DiffPoly) -> PipelineReport:
    m = f.order()
    if not g.is_zero() and g.order() > m:
        raise LeaderMismatch("g has higher order than f")
    if m < 0:
        f_red, common = f, DiffPoly.one(f.deriv)
    else:
        f_red, common = coprime_reduce(f, g, m)
    result = gcd_eliminate(f_red, g)
    return PipelineReport(f_red, common, result)


# ---------------------------------------------------------------------------
# candidate enumeration for witness searches
# ---------------------------------------------------------------------------


@dataclass
class SearchConfig:
    max_degree: int = 3
    allow_fractions: bool = False
    max_candidates: int = 10 ** 6


def _monomials_upto(spec: FieldSpec, deg: int):
    """Exponent tuples of total degree <= deg, graded-lex ascending."""
    k = spec.k
    monos = []
    for d in range(deg + 1):
        layer = []

        def gen(prefix, left, slots):
            if slots == 1:
                layer.append(tuple(prefix + [left]))
                return
            for a in range(left + 1):
                gen(prefix + [a], left - a, slots - 1)

        gen([], d, k)
        layer.sort()
        monos.extend(layer)
    return monos


def iter_candidates(spec: FieldSpec, config: SearchConfig):
    """Deterministic stream of K-rational candidates.

    Polynomials come first, by total degree, then (if enabled) fractions
    with monic denominators of increasing degree.  Raises Exhausted when
    the candidate cap is hit.
    """
    p = spec.p
    budget = config.max_candidates

    def spend():
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise Exhausted(f"candidate cap {config.max_candidates} exceeded")

    def tier(d):
        """Polynomials of total degree exactly d (constants for d = 0)."""
        if d == 0:
            for c in range(p):
                yield spec.poly_const(c)
            return
        top = [e for e in _monomials_upto(spec, d) if sum(e) == d]
        low = _monomials_upto(spec, d - 1)
        for hi in range(1, p ** len(top)):
            hi_digits = _digits(hi, p, len(top))
            for lo in range(p ** len(low)):
                lo_digits = _digits(lo, p, len(low))
                terms = {}
                for e, c in zip(top, hi_digits):
                    if c:
                        terms[e] = c
                for e, c in zip(low, lo_digits):
                    if c:
                        terms[e] = c
                yield Poly(spec, terms)

    for d in range(config.max_degree + 1):
        for poly in tier(d):
            spend()
            yield RatFunc.make(poly, spec._poly_one)
    if not config.allow_fractions:
        return
    for dd in range(1, config.max_degree + 1):
        for den in tier(dd):
            if den.leading_coeff() != 1:
                continue
            for dn in range(config.max_degree + 1):
                for num in tier(dn):
                    if num.is_zero():
                        continue
                    if not poly_gcd(num, den).is_one():
                        continue
                    spend()
                    yield RatFunc.make(num, den)


def _digits(n, base, width):
    out = []
    for _ in range(width):
        n, r = divmod(n, base)
        out.append(r)
    return out


def wood_solve(f: DiffPoly, g: DiffPoly, search: SearchConfig = None):
    """First K-rational witness of f = 0, g != 0 in enumeration order, or None.

    The system must have the documented shape: f of order m >= 0 with
    nonzero separant, g nonzero of order below m.
    """
    search = search or SearchConfig()
    if f.is_zero():
        raise ShapeViolation("f must be nonzero")
    m = f.order()
    if m < 0:
        raise ShapeViolation("f must involve at least one jet variable")
    if separant(f).is_zero():
        raise ShapeViolation("the separant of f vanishes")
    if g.is_zero():
        raise ShapeViolation("g must be nonzero")
    if g.order() >= m:
        raise ShapeViolation("g must have order smaller than f")
    deriv = f.deriv
    for a in iter_candidates(deriv.field, search):
        jets = JetTuple.auto(deriv, a)
        if evaluate(f, jets):
            continue
        if evaluate(g, jets):
            return a
    return None


# ---------------------------------------------------------------------------
# lambda0 formulas and branch rewriting
# ---------------------------------------------------------------------------


class Term:
    """Base class for the tiny term language: x, constants, +, *, powers, d, l0."""

    __slots__ = ()

    def __mul__(self, other):
        return TMul(self, other)

    def __add__(self, other):
        return TAdd(self, other)


class TConst(Term):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        return isinstance(other, TConst) and self.value == other.value

    def __hash__(self):
        return hash(("c", self.value))

    def __str__(self):
        s = str(self.value)
        return f"({s})" if " " in s or "/" in s else s


class TVar(Term):
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, TVar)

    def __hash__(self):
        return hash("x")

    def __str__(self):
        return "x"


class TAdd(Term):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __eq__(self, other):
        return isinstance(other, TAdd) and self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash(("+", self.left, self.right))

    def __str__(self):
        return f"{self.left} + {self.right}"


class TMul(Term):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def __eq__(self, other):
        return isinstance(other, TMul) and self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash(("*", self.left, self.right))

    def __str__(self):
        return f"{_factor_str(self.left)}*{_factor_str(self.right)}"


class TPow(Term):
    __slots__ = ("base", "n")

    def __init__(self, base, n):
        self.base = base
        self.n = n

    def __eq__(self, other):
        return isinstance(other, TPow) and self.base == other.base and self.n == other.n

    def __hash__(self):
        return hash(("^", self.base, self.n))

    def __str__(self):
        return f"{_factor_str(self.base)}^{self.n}"


class TDeriv(Term):
    __slots__ = ("child",)

    def __init__(self, child):
        self.child = child

    def __eq__(self, other):
        return isinstance(other, TDeriv) and self.child == other.child

    def __hash__(self):
        return hash(("d", self.child))

    def __str__(self):
        return f"d({self.child})"


class TLambda0(Term):
    __slots__ = ("child",)

    def __init__(self, child):
        self.child = child

    def __eq__(self, other):
        return isinstance(other, TLambda0) and self.child == other.child

    def __hash__(self):
        return hash(("l0", self.child))

    def __str__(self):
        return f"l0({self.child})"


def _factor_str(t: Term) -> str:
    s = str(t)
    if isinstance(t, TAdd) or (isinstance(t, TConst) and (" " in str(t.value))):
        return f"({s})"
    return s


@dataclass(frozen=True)
class Atom:
    lhs: Term
    rhs: Term
    negated: bool = False

    def __str__(self):
        op = "!=" if self.negated else "="
        return f"{self.lhs} {op} {self.rhs}"


@dataclass
class Lambda0Formula:
    """A conjunction of (in)equality atoms over the term language."""

    atoms: list

    def __str__(self):
        return " & ".join(str(a) for a in self.atoms) if self.atoms else "true"


def term_eval(t: Term, x, ctx):
    """Evaluate a term at x under the ambient derivation and lambda0."""
    if isinstance(t, TConst):
        return t.value
    if isinstance(t, TVar):
        return x
    if isinstance(t, TAdd):
        return term_eval(t.left, x, ctx) + term_eval(t.right, x, ctx)
    if isinstance(t, TMul):
        return term_eval(t.left, x, ctx) * term_eval(t.right, x, ctx)
    if isinstance(t, TPow):
        return term_eval(t.base, x, ctx) ** t.n
    if isinstance(t, TDeriv):
        return ctx.derive(term_eval(t.child, x, ctx))
    if isinstance(t, TLambda0):
        return term_eval(t.child, x, ctx).lambda0()
    raise TypeError(f"unknown term {t!r}")


def formula_eval(phi: Lambda0Formula, x, ctx) -> bool:
    for atom in phi.atoms:
        equal = term_eval(atom.lhs, x, ctx) == term_eval(atom.rhs, x, ctx)
        if equal == atom.negated:
            return False
    return True


def _contains_l0(t: Term) -> bool:
    if isinstance(t, TLambda0):
        return True
    if isinstance(t, (TAdd, TMul)):
        return _contains_l0(t.left) or _contains_l0(t.right)
    if isinstance(t, TPow):
        return _contains_l0(t.base)
    if isinstance(t, TDeriv):
        return _contains_l0(t.child)
    return False


def _innermost_l0(t: Term):
    """Some lambda0 subterm whose own argument is lambda0-free."""
    if isinstance(t, TLambda0):
        inner = _innermost_l0(t.child)
        return inner if inner is not None else t
    if isinstance(t, (TAdd, TMul)):
        return _innermost_l0(t.left) or _innermost_l0(t.right)
    if isinstance(t, TPow):
        return _innermost_l0(t.base)
    if isinstance(t, TDeriv):
        return _innermost_l0(t.child)
    return None


def _subst_l0(t: Term, arg: Term, replacement: Term) -> Term:
    """Replace every occurrence of l0(arg) by replacement."""
    if isinstance(t, TLambda0) and t.child == arg:
        return replacement
    if isinstance(t, TLambda0):
        return TLambda0(_subst_l0(t.child, arg, replacement))
    if isinstance(t, TAdd):
        return TAdd(_subst_l0(t.left, arg, replacement), _subst_l0(t.right, arg, replacement))
    if isinstance(t, TMul):
        return TMul(_subst_l0(t.left, arg, replacement), _subst_l0(t.right, arg, replacement))
    if isinstance(t, TPow):
        return TPow(_subst_l0(t.base, arg, replacement), t.n)
    if isinstance(t, TDeriv):
        return TDeriv(_subst_l0(t.child, arg, replacement))
    return t


def _pth_power(t: Term, p: int) -> Term:
    """Push a p-th power through sums and products (freshman arithmetic)."""
    if isinstance(t, TConst):
        return TConst(t.value ** p)
    if isinstance(t, TAdd):
        return TAdd(_pth_power(t.left, p), _pth_power(t.right, p))
    if isinstance(t, TMul):
        return TMul(_pth_power(t.left, p), _pth_power(t.right, p))
    if isinstance(t, TPow):
        return TPow(t.base, t.n * p)
    return TPow(t, p)


def _clear_l0_power(t: Term, arg: Term, p: int):
    """Rewrite l0(arg)^(pk) -> arg^k; returns None if some occurrence resists."""
    if isinstance(t, TPow) and isinstance(t.base, TLambda0) and t.base.child == arg:
        if t.n % p:
            return None
        k = t.n // p
        return arg if k == 1 else TPow(arg, k)
    if isinstance(t, TLambda0):
        if t.child == arg:
            return None  # bare occurrence, exponent 1
        return None if _mentions_l0_of(t.child, arg) else t
    if isinstance(t, TAdd):
        l = _clear_l0_power(t.left, arg, p)
        r = _clear_l0_power(t.right, arg, p)
        return None if l is None or r is None else TAdd(l, r)
    if isinstance(t, TMul):
        l = _clear_l0_power(t.left, arg, p)
        r = _clear_l0_power(t.right, arg, p)
        return None if l is None or r is None else TMul(l, r)
    if isinstance(t, TPow):
        inner = _clear_l0_power(t.base, arg, p)
        return None if inner is None else TPow(inner, t.n)
    if isinstance(t, TDeriv):
        return None if _mentions_l0_of(t.child, arg) else t
    return t


def _mentions_l0_of(t: Term, arg: Term) -> bool:
    if isinstance(t, TLambda0) and t.child == arg:
        return True
    if isinstance(t, (TAdd, TMul)):
        return _mentions_l0_of(t.left, arg) or _mentions_l0_of(t.right, arg)
    if isinstance(t, TPow):
        return _mentions_l0_of(t.base, arg)
    if isinstance(t, (TDeriv, TLambda0)):
        return _mentions_l0_of(t.child, arg)
    return False


def _fold(t: Term, ctx) -> Term:
    """Constant folding; keeps anything involving the variable symbolic."""
    if isinstance(t, TAdd):
        l, r = _fold(t.left, ctx), _fold(t.right, ctx)
        if isinstance(l, TConst) and isinstance(r, TConst):
            return TConst(l.value + r.value)
        if isinstance(l, TConst) and not l.value:
            return r
        if isinstance(r, TConst) and not r.value:
            return l
        return TAdd(l, r)
    if isinstance(t, TMul):
        l, r = _fold(t.left, ctx), _fold(t.right, ctx)
        if isinstance(l, TConst) and isinstance(r, TConst):
            return TConst(l.value * r.value)
        for a, b in ((l, r), (r, l)):
            if isinstance(a, TConst):
                if not a.value:
                    return TConst(a.value)
                if a.value == 1:
                    return b
        return TMul(l, r)
    if isinstance(t, TPow):
        base = _fold(t.base, ctx)
        if t.n == 1:
            return base
        if isinstance(base, TConst):
            return TConst(base.value ** t.n)
        if isinstance(base, TPow):
            return TPow(base.base, base.n * t.n)
        return TPow(base, t.n)
    if isinstance(t, TDeriv):
        child = _fold(t.child, ctx)
        if isinstance(child, TConst):
            return TConst(ctx.derive(child.value))
        return TDeriv(child)
    if isinstance(t, TLambda0):
        child = _fold(t.child, ctx)
        if isinstance(child, TConst):
            return TConst(child.value.lambda0())
        return TLambda0(child)
    return t


def _simplify_atoms(atoms, ctx):
    """Fold constants; drop trivially true atoms; None when one is false."""
    out = []
    for atom in atoms:
        lhs = _fold(atom.lhs, ctx)
        rhs = _fold(atom.rhs, ctx)
        if isinstance(lhs, TConst) and isinstance(rhs, TConst):
            holds = (lhs.value == rhs.value) != atom.negated
            if holds:
                continue
            return None
        out.append(Atom(lhs, rhs, atom.negated))
    return out


def _check_flat_l0(t: Term, under=None):
    # the p-th power raise clears lambda0 only at equation level; an
    # occurrence under d() or under another lambda0 has no derivation-only
    # rewriting in this term language
    if isinstance(t, TLambda0):
        if under is not None:
            raise ShapeViolation(f"lambda0 under {under} is not rewritable")
        _check_flat_l0(t.child, under="l0")
    elif isinstance(t, TDeriv):
        _check_flat_l0(t.child, under="d")
    elif isinstance(t, (TAdd, TMul)):
        _check_flat_l0(t.left, under)
        _check_flat_l0(t.right, under)
    elif isinstance(t, TPow):
        _check_flat_l0(t.base, under)


def lambda0_rewrite(phi: Lambda0Formula, ctx) -> list:
    """Case-split every lambda0 occurrence into derivation-only branches.

    Returns a list of Lambda0Formula without any lambda0 nodes; each
    branch implies phi, and over strict fields the disjunction of the
    branches is equivalent to phi.  Unsatisfiable branches are pruned.
    Occurrences must be flat: a lambda0 nested under d() or under another
    lambda0 is rejected, since no derivation-only rewriting of such a
    term exists in this language.
    """
    for atom in phi.atoms:
        _check_flat_l0(atom.lhs)
        _check_flat_l0(atom.rhs)
    p = ctx.p
    results = []

    def rec(atoms):
        atoms = _simplify_atoms(atoms, ctx)
        if atoms is None:
            return
        target = None
        for atom in atoms:
            for side in (atom.lhs, atom.rhs):
                target = _innermost_l0(side)
                if target is not None:
                    break
            if target is not None:
                break
        if target is None:
            results.append(Lambda0Formula(atoms))
            return
        arg = target.child

        # branch 1: d(arg) = 0, clear the lambda0 by a p-th power raise
        root_atoms = [Atom(TDeriv(arg), TConst(ctx.zero()))]
        ok = True
        for atom in atoms:
            lhs, rhs = atom.lhs, atom.rhs
            if _mentions_l0_of(lhs, arg) or _mentions_l0_of(rhs, arg):
                cl = _clear_l0_power(lhs, arg, p)
                cr = _clear_l0_power(rhs, arg, p)
                if cl is None or cr is None:
                    lhs2, rhs2 = _pth_power(lhs, p), _pth_power(rhs, p)
                    cl = _clear_l0_power(lhs2, arg, p)
                    cr = _clear_l0_power(rhs2, arg, p)
                if cl is None or cr is None:
                    ok = False
                    break
                root_atoms.append(Atom(cl, cr, atom.negated))
            else:
                root_atoms.append(atom)
        if ok:
            rec(root_atoms)

        # branch 2: d(arg) != 0, the lambda0 collapses to zero
        zero = TConst(ctx.zero())
        zero_atoms = [Atom(TDeriv(arg), TConst(ctx.zero()), negated=True)]
        for atom in atoms:
            zero_atoms.append(Atom(
                _subst_l0(atom.lhs, arg, zero),
                _subst_l0(atom.rhs, arg, zero),
                atom.negated,
            ))
        rec(zero_atoms)

    rec(list(phi.atoms))
    return results
