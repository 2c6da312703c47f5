"""Jet expansion of u + L*v and power recovery from an annihilator.

For differentially algebraic u, v and a differentially transcendental L,
the k-th jet of u + L*v collapses to three terms because the twisted
cross terms are p-th powers:

    (u + L v)^(k) = u^(k) + L^(k) * v^(q^k) + L^(q^k) * v^(k)   (k >= 1).

Given a polynomial G(X_0..X_t, Y_0..Y_s) that annihilates the jets of
(L, u + L v), differentiating with respect to the L-jets yields

    dG/dX_i + dG/dY_i * v^(q^i) = 0   at the substituted tuple,

so whenever dG/dY_i survives a substitution L -> lambda in K, the power
v^(q^i) is recovered as a quotient of the two partial derivatives.
Annihilators are always inputs here; finding them is elimination theory
this package does not attempt.  The lambda search checks nonvanishing
directly at the substituted tuple rather than reducing to base-field
instances, and no minimality of the total degree of G is assumed.
"""

from __future__ import annotations

from .diffpoly import JetTuple
from .errors import Exhausted, NotAnnihilator, SeparantVanishes
from .frob_derivation import FrobDerivation
from .kpoly import KPoly
from .reduction import SearchConfig, iter_candidates


class UVContext:
    """The pair u, v with jets, in a field or tower carrying a derivation."""

    __slots__ = ("ctx", "u", "v", "u_jets", "v_jets")

    def __init__(self, ctx, u, v):
        self.ctx = ctx
        self.u = u
        self.v = v
        self.u_jets = JetTuple.auto(ctx, u)
        self.v_jets = JetTuple.auto(ctx, v)

    @property
    def q(self):
        return self.ctx.q

    @property
    def n(self):
        return self.ctx.n

    @property
    def base_field(self):
        return self.ctx.field

    def coeff_ring(self):
        """Source of zero()/one() matching the jet element type."""
        if isinstance(self.ctx, FrobDerivation):
            return self.ctx.field
        return self.ctx

    def v_power(self, i: int):
        """v^(q^i), computed by the cheap Frobenius shortcut."""
        return _as_ring_element(self.v, self).frobenius(self.n * i)

    def lambda_jets(self, lam, upto: int):
        """(lam, d(lam), ..., d^t(lam)) promoted into the ambient field."""
        jets = JetTuple.auto(self.ctx, _promote(self, lam))
        return [jets.get(i) for i in range(upto + 1)]

    def combined_jets(self, lam, upto: int):
        """(w, d(w), ..., d^s(w)) for w = u + lam * v."""
        w = _as_ring_element(self.u, self) + _promote(self, lam) * _as_ring_element(self.v, self)
        jets = JetTuple.auto(self.ctx, w)
        return [jets.get(i) for i in range(upto + 1)]


def _promote(uv: UVContext, value):
    ring = uv.coeff_ring()
    promote = getattr(ring, "promote", None)
    return promote(value) if promote is not None else value


def _as_ring_element(value, uv: UVContext):
    return _promote(uv, value)


class AnnihilatorPoly:
    """A nonzero polynomial in X_0..X_t, Y_0..Y_s over K, taken as input."""

    __slots__ = ("poly", "t", "s")

    def __init__(self, poly: KPoly, t: int, s: int):
        if poly.is_zero():
            raise ValueError("annihilator polynomial must be nonzero")
        expected = tuple(f"X{i}" for i in range(t + 1)) + tuple(f"Y{i}" for i in range(s + 1))
        if poly.vars != expected:
            raise ValueError(f"annihilator variables must be {expected}")
        self.poly = poly
        self.t = t
        self.s = s

    @classmethod
    def vars_for(cls, t: int, s: int):
        return tuple(f"X{i}" for i in range(t + 1)) + tuple(f"Y{i}" for i in range(s + 1))

    def substituted_tuple(self, ctx: UVContext, lam):
        return ctx.lambda_jets(lam, self.t) + ctx.combined_jets(lam, self.s)


def twisted_jet_expand(k: int, ctx: UVContext, prefix: str = "L") -> KPoly:
    """The k-th jet of u + L*v as a polynomial in the formal L-jets.

    Variables are named prefix + index up to k; the transcendental L is
    handled purely formally and never as a field element.
    """
    if k < 0:
        raise ValueError("jet index must be nonnegative")
    ring = ctx.coeff_ring()
    vars = tuple(f"{prefix}{i}" for i in range(k + 1))
    u_k = _as_ring_element(ctx.u_jets.get(k), ctx)
    v_k = _as_ring_element(ctx.v_jets.get(k), ctx)
    if k == 0:
        terms = {}
        if u_k:
            terms[(0,)] = u_k
        if v_k:
            terms[(1,)] = v_k
        return KPoly(ring, vars, terms)
    qk = ctx.q ** k
    terms = {}
    vqk = ctx.v_power(k)
    if vqk:
        e = [0] * (k + 1)
        e[k] = 1
        terms[tuple(e)] = vqk
    if v_k:
        e = [0] * (k + 1)
        e[0] = qk
        key = tuple(e)
        terms[key] = terms.get(key, ring.zero()) + v_k if key in terms else v_k
    if u_k:
        key = (0,) * (k + 1)
        terms[key] = u_k
    return KPoly(ring, vars, {e: c for e, c in terms.items() if c})


def partial_identity_check(G: AnnihilatorPoly, i: int, ctx: UVContext, lam):
    """Evaluate dG/dX_i + dG/dY_i * v^(q^i) at the substituted tuple.

    The tuple substitutes lam for L; G must vanish there.  Returns the
    computed value together with the expected zero.
    """
    if not 0 <= i <= G.s:
        raise ValueError(f"index {i} out of range 0..{G.s}")
    values = G.substituted_tuple(ctx, lam)
    if G.poly.evaluate(values):
        raise NotAnnihilator("G does not vanish on the substituted jet tuple")
    gx = G.poly.partial(i).evaluate(values) if i <= G.t else ctx.coeff_ring().zero()
    gy = G.poly.partial(G.t + 1 + i).evaluate(values)
    lhs = gx + gy * ctx.v_power(i)
    return lhs, ctx.coeff_ring().zero()


def recover_power(G: AnnihilatorPoly, i: int, lam, ctx: UVContext):
    """v^(q^i) as -(dG/dX_i)/(dG/dY_i) at the lambda-substituted tuple."""
    if not 0 <= i <= min(G.t, G.s):
        raise ValueError(f"index {i} out of range")
    values = G.substituted_tuple(ctx, lam)
    denom = G.poly.partial(G.t + 1 + i).evaluate(values)
    if not denom:
        raise SeparantVanishes("dG/dY_i vanishes at the substituted tuple")
    numer = G.poly.partial(i).evaluate(values)
    return -numer / denom


def find_lambda(G: AnnihilatorPoly, ctx: UVContext, search: SearchConfig = None):
    """First candidate making some dG/dY_i nonvanish at the tuple, or None."""
    search = search or SearchConfig()
    partials = [G.poly.partial(G.t + 1 + i) for i in range(G.s + 1)]
    if all(p.is_zero() for p in partials):
        return None
    try:
        for lam in iter_candidates(ctx.base_field, search):
            values = G.substituted_tuple(ctx, lam)
            for p in partials:
                if p.evaluate(values):
                    return lam
    except Exhausted:
        return None
    return None
