"""Twisted Frobenius tangent bundles of affine varieties.

For a polynomial f over K in ambient variables X_1..X_m, the twisted
derivative is the polynomial in (X_1..X_m, X_1'..X_m')

    f^d(X^q) + sum_i (df/dX_i)(X)^q * X_i'

and the prolongation of an ideal adjoins the twisted derivatives of its
generators.  For any point a of the variety with jets available, the pair
(a, d(a)) satisfies the prolonged generators; the docs call the resulting
zero set the first prolongation.  (The source material states the section
property with the plain variety as target, which reads like a typo for
the prolongation; everything here targets the prolongation.)

No irreducibility or separability of projections is decided here; only
instance evidence (sections and explicit non-witnesses) is computed.
"""

from __future__ import annotations

from .diffpoly import JetTuple
from .errors import FieldMismatch
from .kpoly import KPoly


class IdealGens:
    """A variety presented by finitely many polynomial generators."""

    __slots__ = ("vars", "gens")

    def __init__(self, vars, gens):
        self.vars = tuple(vars)
        gens = list(gens)
        if not gens:
            raise ValueError("at least one generator is required")
        for g in gens:
            if not isinstance(g, KPoly) or g.vars != self.vars:
                raise FieldMismatch("generators must share the declared variables")
        self.gens = gens

    def __repr__(self):
        return f"IdealGens(vars={self.vars!r}, gens={[str(g) for g in self.gens]})"


class ProlongedIdeal(IdealGens):
    """Original generators plus their twisted derivatives, in doubled variables."""

    __slots__ = ("original_count",)

    def __init__(self, vars, gens, original_count):
        super().__init__(vars, gens)
        self.original_count = original_count


def _primed(vars):
    return tuple(vars) + tuple(f"{v}'" for v in vars)


def twist_derive_poly(f: KPoly, d) -> KPoly:
    """The twisted derivative of f as a polynomial in the doubled variables."""
    m = len(f.vars)
    new_vars = _primed(f.vars)
    q = d.q
    out = f.coeff_map(d.derive).stretch(q).extend_vars(new_vars)
    for i in range(m):
        partial_q = f.partial(i).frob_power(d.p, d.n).extend_vars(new_vars)
        if partial_q.is_zero():
            continue
        prime = KPoly.var(f.ring, new_vars, new_vars[m + i])
        out = out + partial_q * prime
    return out


def classical_tangent_part(f: KPoly) -> KPoly:
    """The linear part sum_i (df/dX_i)(X) * X_i' of the untwisted tangent bundle.

    Dedicated code path for the degeneration where the derivation is zero
    and no Frobenius twist is applied; kept separate rather than as a
    runtime mode of twist_derive_poly.
    """
    new_vars = _primed(f.vars)
    m = len(f.vars)
    out = KPoly.zero(f.ring, new_vars)
    for i in range(m):
        partial = f.partial(i).extend_vars(new_vars)
        if partial.is_zero():
            continue
        out = out + partial * KPoly.var(f.ring, new_vars, new_vars[m + i])
    return out


def prolong(V: IdealGens, d) -> ProlongedIdeal:
    """Generators of the first prolongation: (I, d(I))."""
    new_vars = _primed(V.vars)
    lifted = [g.extend_vars(new_vars) for g in V.gens]
    derived = [twist_derive_poly(g, d) for g in V.gens]
    return ProlongedIdeal(new_vars, lifted + derived, len(V.gens))


def check_section(W: IdealGens, point, ctx=None) -> bool:
    """Does (a, d(a)) satisfy every generator of W?

    W lives in doubled variables (X_1..X_m, X_1'..X_m'); point supplies one
    JetTuple (or plain element, with ctx providing the derivation) per
    ambient variable.
    """
    if len(W.vars) % 2 != 0:
        raise ValueError("section checks need generators in doubled variables")
    m = len(W.vars) // 2
    jets = []
    for a in point:
        if isinstance(a, JetTuple):
            jets.append(a)
        else:
            if ctx is None:
                raise ValueError("a derivation context is required for plain points")
            jets.append(JetTuple.auto(ctx, a))
    if len(jets) != m:
        raise ValueError(f"expected {m} point coordinates, got {len(jets)}")
    values = [j.get(0) for j in jets] + [j.get(1) for j in jets]
    return all(not g.evaluate(values) for g in W.gens)
