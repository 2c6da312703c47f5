"""Sparse polynomials in named variables with field coefficients.

KPoly is the shared workhorse for everything that is "a polynomial over
the function field K": ambient-variable polynomials in the geometry
module, annihilators in the primitive-element kit, minimal polynomials of
separable extensions and the univariate-in-the-leader views used by the
elimination pipeline.  Coefficients are duck-typed: RatFunc and tower
elements both work, as long as they support +, -, *, /, unary - and
truthiness.

The ``ring`` attribute is whatever object can hand out zero()/one()
coefficients (a FieldSpec or a TowerSpec).
"""

from __future__ import annotations

from .errors import DivisionByZero


def _glex_key(exps):
    return (sum(exps), exps)


class KPoly:
    __slots__ = ("ring", "vars", "terms")

    def __init__(self, ring, vars, terms):
        self.ring = ring
        self.vars = tuple(vars)
        self.terms = terms

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ring, vars):
        return cls(ring, vars, {})

    @classmethod
    def one(cls, ring, vars):
        return cls(ring, vars, {(0,) * len(vars): ring.one()})

    @classmethod
    def const(cls, ring, vars, c):
        if not c:
            return cls(ring, vars, {})
        return cls(ring, vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, ring, vars, name, power=1):
        e = [0] * len(vars)
        e[tuple(vars).index(name)] = power
        return cls(ring, vars, {tuple(e): ring.one()})

    @classmethod
    def build(cls, ring, vars, terms):
        out = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != len(vars) or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r}")
            acc = out.get(exps)
            acc = c if acc is None else acc + c
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return cls(ring, vars, out)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return self.ring.zero()
        return self.terms[(0,) * len(self.vars)]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def leading_monomial(self):
        return max(self.terms, key=_glex_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    # -- arithmetic ----------------------------------------------------------

    def _same(self, other):
        return isinstance(other, KPoly) and other.vars == self.vars

    def __add__(self, other):
        if not self._same(other):
            return self + KPoly.const(self.ring, self.vars, self._scalar(other))
        out = dict(self.terms)
        for e, c in other.terms.items():
            acc = out.get(e)
            acc = c if acc is None else acc + c
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
        return KPoly(self.ring, self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return KPoly(self.ring, self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not self._same(other):
            other = KPoly.const(self.ring, self.vars, self._scalar(other))
        return self + (-other)

    def _scalar(self, other):
        if isinstance(other, int):
            return self.ring.one() * other if other else self.ring.zero()
        return other

    def __mul__(self, other):
        if not self._same(other):
            c = self._scalar(other)
            if not c:
                return KPoly(self.ring, self.vars, {})
            return KPoly(self.ring, self.vars, {e: v * c for e, v in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = out.get(e)
                acc = prod if acc is None else acc + prod
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        return KPoly(self.ring, self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = KPoly.one(self.ring, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_constant() and self.constant_value() == other
        if not self._same(other):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((self.vars, frozenset((e, str(c)) for e, c in self.terms.items())))

    # -- structure ops -------------------------------------------------------

    def partial(self, i):
        """Formal partial derivative with respect to variable i."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                coeff = c * e[i]
                if coeff:
                    e2 = list(e)
                    e2[i] -= 1
                    key = tuple(e2)
                    acc = out.get(key)
                    acc = coeff if acc is None else acc + coeff
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
        return KPoly(self.ring, self.vars, out)

    def coeff_map(self, fn):
        """Apply fn to every coefficient, keeping monomials; drops zeros."""
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return KPoly(self.ring, self.vars, out)

    def stretch(self, factor):
        """Multiply every exponent by factor (substitute each var by var^factor)."""
        if factor == 1:
            return self
        return KPoly(self.ring, self.vars,
                     {tuple(a * factor for a in e): c for e, c in self.terms.items()})

    def frob_power(self, p, k):
        """The p^k-th power, computed by the characteristic-p shortcut."""
        if k == 0:
            return self
        q = p ** k

        def fpow(c):
            fr = getattr(c, "frobenius", None)
            return fr(k) if fr is not None else _pow_any(c, q)

        return KPoly(self.ring, self.vars,
                     {tuple(a * q for a in e): fpow(c) for e, c in self.terms.items()})

    def rename(self, new_vars):
        if len(new_vars) != len(self.vars):
            raise ValueError("variable count mismatch")
        return KPoly(self.ring, tuple(new_vars), self.terms)

    def extend_vars(self, new_vars):
        """Reinterpret over a longer variable list that starts with ours."""
        new_vars = tuple(new_vars)
        if new_vars[: len(self.vars)] != self.vars:
            raise ValueError("new variable list must extend the old one")
        pad = (0,) * (len(new_vars) - len(self.vars))
        return KPoly(self.ring, new_vars, {e + pad: c for e, c in self.terms.items()})

    def evaluate(self, values):
        """Substitute one value per variable and sum up exactly."""
        if len(values) != len(self.vars):
            raise ValueError("one value per variable required")
        acc = None
        powers = [{} for _ in values]
        for e, c in self.terms.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    cache = powers[i]
                    if a not in cache:
                        cache[a] = _pow_any(values[i], a)
                    term = term * cache[a]
            acc = term if acc is None else acc + term
        if acc is None:
            return self.ring.zero()
        return acc

    # -- printing --------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_glex_key, reverse=True):
            c = self.terms[exps]
            factors = []
            for name, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = str(c)
            if not factors:
                parts.append(cs)
                continue
            mono = "*".join(factors)
            if cs == "1":
                parts.append(mono)
            else:
                if " " in cs or "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"KPoly({self})"


def _pow_any(value, n):
    result = None
    base = value
    while n:
        if n & 1:
            result = base if result is None else result * base
        base = base * base if n > 1 else base
        n >>= 1
    return result


def _field_pow(c, n):
    out = _pow_any(c, n)
    return out


# ---------------------------------------------------------------------------
# univariate helpers over a coefficient field (used for minimal polynomials)
# ---------------------------------------------------------------------------


def upoly_divmod(f: KPoly, g: KPoly):
    """Division with remainder for univariate KPoly over a field."""
    if len(f.vars) != 1 or f.vars != g.vars:
        raise ValueError("univariate polynomials over the same variable required")
    if g.is_zero():
        raise DivisionByZero("univariate division by zero")
    dg = g.degree_in(0)
    lc = g.terms[(dg,)]
    q = KPoly.zero(f.ring, f.vars)
    r = f
    while not r.is_zero() and r.degree_in(0) >= dg:
        dr = r.degree_in(0)
        c = r.terms[(dr,)] / lc
        mono = KPoly(f.ring, f.vars, {(dr - dg,): c})
        q = q + mono
        r = r - mono * g
    return q, r


def upoly_gcd(f: KPoly, g: KPoly) -> KPoly:
    """Monic gcd of univariate KPoly over a field."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, upoly_divmod(a, b)[1]
    if a.is_zero():
        return a
    lc = a.terms[(a.degree_in(0),)]
    return a * (a.ring.one() / lc)


def upoly_invmod(f: KPoly, mod: KPoly) -> KPoly:
    """Inverse of f modulo mod; requires gcd(f, mod) = 1."""
    r0, r1 = mod, upoly_divmod(f, mod)[1]
    s0, s1 = KPoly.zero(f.ring, f.vars), KPoly.one(f.ring, f.vars)
    while not r1.is_zero():
        q, r2 = upoly_divmod(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
    if r0.degree_in(0) != 0:
        raise DivisionByZero("element not invertible modulo the minimal polynomial")
    return upoly_divmod(s0 * (f.ring.one() / r0.constant_value()), mod)[1]


# ---------------------------------------------------------------------------
# multivariate gcd over a coefficient field (primitive PRS)
# ---------------------------------------------------------------------------


def _as_univar(f: KPoly, i: int):
    out = {}
    for e, c in f.terms.items():
        d = e[i]
        e2 = list(e)
        e2[i] = 0
        out.setdefault(d, {})[tuple(e2)] = c
    return {d: KPoly(f.ring, f.vars, t) for d, t in out.items()}


def _from_univar(coeffs, i):
    sample = next(iter(coeffs.values()))
    out = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[i] += d
            out[tuple(e2)] = c
    return KPoly(sample.ring, sample.vars, out)


def kpoly_divexact(f: KPoly, g: KPoly) -> KPoly:
    """Exact division f/g; raises ValueError when not exact."""
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if f.is_zero():
        return f
    g_lm = g.leading_monomial()
    g_lc = g.terms[g_lm]
    rem = dict(f.terms)
    out = {}
    while rem:
        lm = max(rem, key=_glex_key)
        e = tuple(a - b for a, b in zip(lm, g_lm))
        if any(a < 0 for a in e):
            raise ValueError("inexact polynomial division")
        c = rem[lm] / g_lc
        out[e] = c
        for ge, gc in g.terms.items():
            me = tuple(a + b for a, b in zip(e, ge))
            acc = rem.get(me)
            acc = -(c * gc) if acc is None else acc - c * gc
            if acc:
                rem[me] = acc
            else:
                rem.pop(me, None)
    return KPoly(f.ring, f.vars, out)


def _content(coeffs):
    g = None
    for c in coeffs:
        g = c if g is None else kpoly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            break
    return _monic(g)


def _monic(f: KPoly) -> KPoly:
    if f.is_zero():
        return f
    lc = f.leading_coeff()
    return f * (f.ring.one() / lc)


def _prem(f: dict, g: dict):
    dg = max(g)
    lc_g = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lc_r = r[dr]
        shift = dr - dg
        new = {d: c * lc_g for d, c in r.items()}
        for d, c in g.items():
            dd = d + shift
            acc = new.get(dd)
            term = c * lc_r
            acc = -term if acc is None else acc - term
            if acc.is_zero():
                new.pop(dd, None)
            else:
                new[dd] = acc
        new.pop(dr, None)
        r = new
    return r


def kpoly_gcd(f: KPoly, g: KPoly) -> KPoly:
    """Gcd over the coefficient field, monic under graded lex."""
    if f.is_zero():
        return _monic(g)
    if g.is_zero():
        return _monic(f)
    if f.is_constant() or g.is_constant():
        return KPoly.one(f.ring, f.vars)
    occupied = set()
    for poly in (f, g):
        for e in poly.terms:
            for i, a in enumerate(e):
                if a:
                    occupied.add(i)
    v = max(occupied)
    fu = _as_univar(f, v)
    gu = _as_univar(g, v)
    if max(fu) == 0 or max(gu) == 0:
        return kpoly_gcd(_content(fu.values()), _content(gu.values()))
    cf = _content(fu.values())
    cg = _content(gu.values())
    a = {d: kpoly_divexact(c, cf) for d, c in fu.items()}
    b = {d: kpoly_divexact(c, cg) for d, c in gu.items()}
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            result = b
            break
        if max(r) == 0:
            result = None
            break
        content = _content(r.values())
        a, b = b, {d: kpoly_divexact(c, content) for d, c in r.items()}
    cont = kpoly_gcd(cf, cg)
    if result is None:
        return _monic(cont)
    return _monic(_from_univar(result, v) * cont)
