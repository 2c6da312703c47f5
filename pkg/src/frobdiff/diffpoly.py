"""Differential polynomials in one indeterminate over K.

A DiffPoly is a sparse polynomial in the jet variables x, x', x'', ...
with RatFunc coefficients, tied to an ambient twisted derivation.  The
derivation extends to the whole ring by sending the i-th jet to the
(i+1)-st and acting on coefficients; applying it raises the degree in
lower jets, which is why the elimination machinery downstream never
relies on division.

Keys are exponent tuples trimmed of trailing zeros, so equal terms have
equal keys no matter which jets their siblings touch.
"""

from __future__ import annotations

from .base_field import Poly, RatFunc
from .errors import ConstantPolynomial, FieldMismatch, InsufficientJets, ZeroPolynomial
from .kpoly import KPoly


def _trim(exps):
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


def _pad(exps, size):
    return exps + (0,) * (size - len(exps))


def _jet_sort_key(exps, size):
    e = _pad(exps, size)
    return (sum(e), tuple(reversed(e)))


class DiffPoly:
    """Sparse differential polynomial; context is the ambient derivation."""

    __slots__ = ("deriv", "terms")

    def __init__(self, deriv, terms: dict):
        self.deriv = deriv
        self.terms = terms

    # -- constructors ----------------------------------------------------

    @classmethod
    def build(cls, deriv, terms: dict) -> "DiffPoly":
        out = {}
        for exps, c in terms.items():
            if isinstance(c, int):
                c = deriv.field.const(c)
            elif isinstance(c, Poly):
                c = RatFunc(c, c.spec._poly_one)
            key = _trim(exps)
            acc = out.get(key)
            acc = c if acc is None else acc + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return cls(deriv, out)

    @classmethod
    def zero(cls, deriv) -> "DiffPoly":
        return cls(deriv, {})

    @classmethod
    def one(cls, deriv) -> "DiffPoly":
        return cls(deriv, {(): deriv.field.one()})

    @classmethod
    def const(cls, deriv, c) -> "DiffPoly":
        if isinstance(c, int):
            c = deriv.field.const(c)
        if not c:
            return cls(deriv, {})
        return cls(deriv, {(): c})

    @classmethod
    def jet(cls, deriv, k: int, power: int = 1) -> "DiffPoly":
        e = [0] * (k + 1)
        e[k] = power
        return cls(deriv, {_trim(e): deriv.field.one()})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Largest jet index present; -1 for nonzero constants."""
        if not self.terms:
            raise ZeroPolynomial("order of the zero differential polynomial")
        return max(len(e) for e in self.terms) - 1

    def degree_in_top(self) -> int:
        """Degree in the highest jet variable."""
        m = self.order()
        if m < 0:
            return 0
        return max((e[m] for e in self.terms if len(e) == m + 1), default=0)

    def coefficient(self, exps) -> RatFunc:
        return self.terms.get(_trim(exps), self.deriv.field.zero())

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DiffPoly):
            if other.deriv.field != self.deriv.field:
                raise FieldMismatch("differential polynomials over different fields")
            return other
        if isinstance(other, (int, RatFunc, Poly)):
            return DiffPoly.const(self.deriv, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            acc = c if acc is None else acc + c
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
        return DiffPoly(self.deriv, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly(self.deriv, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other.terms) == 1 and () in other.terms:
            c0 = other.terms[()]
            return DiffPoly(self.deriv, {e: c * c0 for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                size = max(len(e1), len(e2))
                e = _trim(tuple(a + b for a, b in zip(_pad(e1, size), _pad(e2, size))))
                prod = c1 * c2
                acc = out.get(e)
                acc = prod if acc is None else acc + prod
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        return DiffPoly(self.deriv, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a differential polynomial")
        result = DiffPoly.one(self.deriv)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset((e, c) for e, c in self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        size = max(len(e) for e in self.terms)
        parts = []
        for exps in sorted(self.terms, key=lambda e: _jet_sort_key(e, size), reverse=True):
            c = self.terms[exps]
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(_jet_name(i))
                elif e > 1:
                    factors.append(f"{_jet_name(i)}^{e}")
            cs = str(c)
            if not factors:
                parts.append(cs)
                continue
            mono = "*".join(factors)
            if cs == "1":
                parts.append(mono)
            else:
                if " " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffPoly({self})"

    # -- characteristic-p structure -------------------------------------------

    def frob_power(self, k: int) -> "DiffPoly":
        """The p^k-th power via the freshman shortcut."""
        if k == 0:
            return self
        q = self.deriv.p ** k
        return DiffPoly(self.deriv,
                        {tuple(a * q for a in e): c.frobenius(k)
                         for e, c in self.terms.items()})

    # -- conversions -------------------------------------------------------

    def as_kpoly(self, order: int = None) -> KPoly:
        m = self.order() if self.terms else -1
        if order is None:
            order = max(m, 0)
        if m > order:
            raise ValueError("polynomial exceeds the requested order")
        vars = tuple(_jet_name(i) for i in range(order + 1))
        return KPoly(self.deriv.field, vars,
                     {_pad(e, order + 1): c for e, c in self.terms.items()})

    @classmethod
    def from_kpoly(cls, deriv, poly: KPoly) -> "DiffPoly":
        return cls(deriv, {_trim(e): c for e, c in poly.terms.items()})


def _jet_name(i: int) -> str:
    if i == 0:
        return "x"
    if i <= 2:
        return "x" + "'" * i
    return f"x^({i})"


# ---------------------------------------------------------------------------
# the derivation on the ring and evaluation
# ---------------------------------------------------------------------------


def delta(f: DiffPoly) -> DiffPoly:
    """Apply the ambient derivation, with each jet mapped to the next one."""
    d = f.deriv
    q = d.q
    p = d.p
    out = DiffPoly.zero(d)
    for exps, c in f.terms.items():
        dc = d.derive(c)
        if dc:
            out = out + DiffPoly.build(d, {tuple(a * q for a in exps): dc})
        cq = c.frobenius(d.n)
        for i, a in enumerate(exps):
            coeff = a % p
            if not coeff:
                continue
            bumped = [e * q for e in exps]
            bumped[i] -= q
            while len(bumped) <= i + 1:
                bumped.append(0)
            bumped[i + 1] += 1
            out = out + DiffPoly.build(d, {tuple(bumped): cq * coeff})
    return out


class JetTuple:
    """The sequence (a, d(a), d^2(a), ...), explicit or derived on demand."""

    __slots__ = ("values", "ctx", "_cache")

    def __init__(self, values=None, ctx=None, element=None):
        self.values = list(values) if values is not None else None
        self.ctx = ctx
        self._cache = [element] if element is not None else None

    @classmethod
    def explicit(cls, values) -> "JetTuple":
        return cls(values=values)

    @classmethod
    def auto(cls, ctx, element) -> "JetTuple":
        """Jets computed from the element by the given derivation context."""
        return cls(ctx=ctx, element=element)

    def get(self, i: int):
        if self.values is not None:
            if i >= len(self.values):
                raise InsufficientJets(f"jet {i} requested, only {len(self.values)} given")
            return self.values[i]
        while len(self._cache) <= i:
            self._cache.append(self.ctx.derive(self._cache[-1]))
        return self._cache[i]


def evaluate(f: DiffPoly, jets) -> object:
    """Substitute jets for the jet variables and evaluate exactly."""
    if not isinstance(jets, JetTuple):
        jets = JetTuple.explicit(jets)
    acc = None
    powers = {}
    for exps, c in f.terms.items():
        term = c
        for i, a in enumerate(exps):
            if a:
                key = (i, a)
                if key not in powers:
                    powers[key] = _pow(jets.get(i), a)
                term = term * powers[key]
        acc = term if acc is None else term + acc
    if acc is None:
        return f.deriv.field.zero()
    return acc


def _pow(value, n):
    result = None
    base = value
    while n:
        if n & 1:
            result = base if result is None else result * base
        base = base * base if n > 1 else base
        n >>= 1
    return result


def order(f: DiffPoly) -> int:
    return f.order()


def separant(f: DiffPoly) -> DiffPoly:
    """Formal partial derivative with respect to the highest jet."""
    m = f.order()
    if m < 0:
        raise ConstantPolynomial("separant of a constant differential polynomial")
    p = f.deriv.p
    out = {}
    for e, c in f.terms.items():
        if len(e) == m + 1 and e[m]:
            coeff = c * (e[m] % p)
            if coeff:
                e2 = list(e)
                e2[m] -= 1
                key = _trim(e2)
                acc = out.get(key)
                acc = coeff if acc is None else acc + coeff
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
    return DiffPoly(f.deriv, out)


def coeff_derive(f, d=None):
    """f^d: apply the derivation to every coefficient, keeping monomials."""
    if isinstance(f, DiffPoly):
        d = d or f.deriv
        out = {}
        for e, c in f.terms.items():
            v = d.derive(c)
            if v:
                out[e] = v
        return DiffPoly(f.deriv, out)
    if d is None:
        raise ValueError("a derivation is required for plain polynomials")
    return f.coeff_map(d.derive)


def total_derivative_check(f: KPoly, jets: list, ctx) -> tuple:
    """Both sides of the chain-rule identity for d(f(a_1, ..., a_m)).

    jets is one JetTuple (or element) per variable of f; the contract is
    that the two returned values are equal.
    """
    tuples = [j if isinstance(j, JetTuple) else JetTuple.auto(ctx, j) for j in jets]
    values = [j.get(0) for j in tuples]
    lhs = ctx.derive(f.evaluate(values))
    q = ctx.q
    fq_values = [_pow_or_one(v, q) for v in values]
    rhs = f.coeff_map(ctx.derive).evaluate(fq_values)
    for j in range(len(values)):
        pj = f.partial(j).evaluate(values)
        rhs = rhs + _frob(pj, ctx) * tuples[j].get(1)
    return lhs, rhs


def _pow_or_one(v, n):
    out = _pow(v, n)
    return out


def _frob(v, ctx):
    return v.frobenius(ctx.n)
