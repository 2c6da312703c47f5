"""Exact arithmetic in F_p(t_1, ..., t_k).

Polynomials are stored sparsely as a map from exponent vectors (one
nonnegative integer per generator) to nonzero residues mod p.  Rational
functions are reduced fractions num/den with den != 0, gcd(num, den) = 1
and den monic under the graded-lexicographic term order; this makes the
representation canonical, so two equal field elements always compare
equal term-for-term.

The characteristic-p extras live here as well: Frobenius powers a^(p^k),
p-th root extraction, the inverse-Frobenius map lambda0 (p-th root on
p-th powers, zero elsewhere) and formal partial derivatives.

All values are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

from .errors import DivisionByZero, FieldMismatch

NEG_INF = float("-inf")  # degree of the zero polynomial


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _glex_key(exps):
    # graded lexicographic: total degree first, then exponents by generator index
    return (sum(exps), exps)


class FieldSpec:
    """Characteristic p together with an ordered tuple of generator names."""

    __slots__ = ("p", "generators", "_index", "_poly_zero", "_poly_one", "_zero", "_one")

    def __init__(self, p: int, generators):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        gens = tuple(generators)
        if not all(gens):
            raise ValueError("generator names must be nonempty")
        if len(set(gens)) != len(gens):
            raise ValueError("generator names must be unique")
        self.p = p
        self.generators = gens
        self._index = {name: i for i, name in enumerate(gens)}
        self._poly_zero = Poly(self, {})
        self._poly_one = Poly(self, {(0,) * len(gens): 1})
        self._zero = RatFunc(self._poly_zero, self._poly_one)
        self._one = RatFunc(self._poly_one, self._poly_one)

    @property
    def k(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise FieldMismatch(f"unknown generator {name!r}") from None

    def poly(self, terms) -> Poly:
        """Build a polynomial from an {exponents: coefficient} mapping."""
        out = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != self.k or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r}")
            c = (out.get(exps, 0) + c) % self.p
            if c:
                out[exps] = c
            else:
                out.pop(exps, None)
        return Poly(self, out)

    def poly_const(self, c: int) -> Poly:
        c %= self.p
        return Poly(self, {(0,) * self.k: c} if c else {})

    def poly_gen(self, name: str) -> Poly:
        e = [0] * self.k
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def zero(self) -> RatFunc:
        return self._zero

    def one(self) -> RatFunc:
        return self._one

    def const(self, c: int) -> RatFunc:
        return RatFunc(self.poly_const(c), self._poly_one)

    def gen(self, name: str) -> RatFunc:
        return RatFunc(self.poly_gen(name), self._poly_one)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.p, self.generators))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, generators={self.generators!r})"


class Poly:
    """Sparse multivariate polynomial over the prime field F_p.

    ``terms`` maps exponent tuples (length k) to residues in 1..p-1; the
    zero polynomial is the empty map.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec: FieldSpec, terms: dict):
        self.spec = spec
        self.terms = terms

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == self.spec._poly_one.terms

    def degree(self):
        """Total degree; minus infinity for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def leading_monomial(self):
        return max(self.terms, key=_glex_key)

    def leading_coeff(self) -> int:
        return self.terms[self.leading_monomial()]

    def constant_coeff(self) -> int:
        return self.terms.get((0,) * self.spec.k, 0)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.spec != self.spec:
                raise FieldMismatch("polynomials over different fields")
            return other
        if isinstance(other, int):
            return self.spec.poly_const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.spec.p
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = (out.get(exps, 0) + c) % p
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Poly(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return Poly(self.spec, {e: (-c) % p for e, c in self.terms.items()})

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
        p = self.spec.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = (out.get(e, 0) + c1 * c2) % p
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.spec._poly_one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: int) -> Poly:
        """Multiply by a scalar from F_p."""
        p = self.spec.p
        c %= p
        if not c:
            return self.spec._poly_zero
        return Poly(self.spec, {e: (c * v) % p for e, v in self.terms.items()})

    def monic(self) -> Poly:
        """Divide by the graded-lex leading coefficient."""
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self.scale(pow(lc, -1, self.spec.p))

    # -- characteristic-p structure -------------------------------------

    def frobenius(self, k: int = 1) -> Poly:
        """The p^k-th power; cheap because coefficients are fixed by Frobenius."""
        if k == 0 or not self.terms:
            return self
        q = self.spec.p ** k
        return Poly(self.spec, {tuple(a * q for a in e): c for e, c in self.terms.items()})

    def pth_root(self):
        """Return g with g^p = self, or None when no such polynomial exists."""
        p = self.spec.p
        out = {}
        for e, c in self.terms.items():
            if any(a % p for a in e):
                return None
            out[tuple(a // p for a in e)] = c
        return Poly(self.spec, out)

    def partial(self, i: int) -> Poly:
        """Formal partial derivative with respect to generator i."""
        p = self.spec.p
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                coeff = (c * e[i]) % p
                if coeff:
                    e2 = list(e)
                    e2[i] -= 1
                    out[tuple(e2)] = coeff
        return Poly(self.spec, out)

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.poly_const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        gens = self.spec.generators
        parts = []
        for exps in sorted(self.terms, key=_glex_key, reverse=True):
            c = self.terms[exps]
            factors = []
            for name, e in zip(gens, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# polynomial gcd / exact division
# ---------------------------------------------------------------------------


def poly_divexact(f: Poly, g: Poly) -> Poly:
    """Exact division f/g; raises ValueError when g does not divide f."""
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if f.is_zero():
        return f
    spec = f.spec
    p = spec.p
    g_lm = g.leading_monomial()
    g_inv = pow(g.terms[g_lm], -1, p)
    rem = dict(f.terms)
    out = {}
    while rem:
        lm = max(rem, key=_glex_key)
        e = tuple(a - b for a, b in zip(lm, g_lm))
        if any(a < 0 for a in e):
            raise ValueError("inexact polynomial division")
        c = (rem[lm] * g_inv) % p
        out[e] = c
        for ge, gc in g.terms.items():
            me = tuple(a + b for a, b in zip(e, ge))
            s = (rem.get(me, 0) - c * gc) % p
            if s:
                rem[me] = s
            else:
                rem.pop(me, None)
    return Poly(spec, out)


def _univar_dense(f: Poly):
    # single-generator polynomial as dense coefficient list
    n = int(f.degree())
    out = [0] * (n + 1)
    for (e,), c in f.terms.items():
        out[e] = c
    return out


def _gcd_dense(a, b, p):
    # Euclid on dense univariate coefficient lists over F_p
    def rem(u, v):
        u = u[:]
        inv = pow(v[-1], -1, p)
        while len(u) >= len(v) and any(u):
            while u and u[-1] == 0:
                u.pop()
            if len(u) < len(v):
                break
            c = (u[-1] * inv) % p
            off = len(u) - len(v)
            for i, vc in enumerate(v):
                u[off + i] = (u[off + i] - c * vc) % p
            while u and u[-1] == 0:
                u.pop()
        return u

    while b:
        a, b = b, rem(a, b)
        while b and b[-1] == 0:
            b.pop()
    return a


def _monomial_gcd(f: Poly, g: Poly) -> Poly:
    mins = None
    for poly in (f, g):
        for e in poly.terms:
            mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
    return Poly(f.spec, {mins: 1})


def _poly_content_coeffs(coeffs):
    g = None
    for c in coeffs:
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return g.monic()
    return g.monic()


def _as_univar(f: Poly, i: int):
    # split off generator i: degree in t_i -> coefficient Poly (exponent i zeroed)
    out = {}
    for e, c in f.terms.items():
        d = e[i]
        e2 = list(e)
        e2[i] = 0
        key = tuple(e2)
        bucket = out.setdefault(d, {})
        bucket[key] = c
    return {d: Poly(f.spec, t) for d, t in out.items()}


def _from_univar(spec: FieldSpec, coeffs: dict, i: int) -> Poly:
    out = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            e2 = list(e)
            e2[i] += d
            out[tuple(e2)] = c
    return Poly(spec, out)


def _prem_univar(f: dict, g: dict, spec: FieldSpec):
    # pseudo-remainder of univariate-view polynomials with Poly coefficients
    dg = max(g)
    lc_g = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lc_r = r[dr]
        shift = dr - dg
        new = {}
        for d, c in r.items():
            new[d] = c * lc_g
        for d, c in g.items():
            dd = d + shift
            val = new.get(dd, spec._poly_zero) - c * lc_r
            if val.is_zero():
                new.pop(dd, None)
            else:
                new[dd] = val
        new.pop(dr, None)
        r = new
    return r


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor, normalized monic under graded lex."""
    if f.spec != g.spec:
        raise FieldMismatch("gcd of polynomials over different fields")
    spec = f.spec
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return spec._poly_one
    if f.is_monomial() or g.is_monomial():
        return _monomial_gcd(f, g)
    if spec.k == 1:
        d = _gcd_dense(_univar_dense(f), _univar_dense(g), spec.p)
        return Poly(spec, {(i,): c for i, c in enumerate(d) if c}).monic()
    # recursive primitive PRS in the highest generator that actually occurs
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
        # one side does not involve the chosen variable after all
        cf = _poly_content_coeffs(fu.values())
        cg = _poly_content_coeffs(gu.values())
        return poly_gcd(cf, cg)
    cf = _poly_content_coeffs(fu.values())
    cg = _poly_content_coeffs(gu.values())
    a = {d: poly_divexact(c, cf) for d, c in fu.items()}
    b = {d: poly_divexact(c, cg) for d, c in gu.items()}
    if max(a) < max(b):
        a, b = b, a
    while True:
        r = _prem_univar(a, b, spec)
        if not r:
            result = b
            break
        if max(r) == 0:
            result = {0: spec._poly_one}
            break
        content = _poly_content_coeffs(r.values())
        a, b = b, {d: poly_divexact(c, content) for d, c in r.items()}
    cont = poly_gcd(cf, cg)
    pp = _from_univar(spec, result, v)
    return (pp * cont).monic()


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced fraction of polynomials over F_p; the canonical field element."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        # callers inside this module may pass pre-normalized pairs; use make()
        # everywhere else
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num: Poly, den: Poly) -> "RatFunc":
        if num.spec != den.spec:
            raise FieldMismatch("fraction of polynomials over different fields")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return num.spec._zero
        if den.is_one():
            return cls(num, den)
        if den.is_constant():
            return cls(num.scale(pow(den.leading_coeff(), -1, den.spec.p)), den.spec._poly_one)
        g = poly_gcd(num, den)
        if not g.is_one():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        lc = den.leading_coeff()
        if lc != 1:
            inv = pow(lc, -1, den.spec.p)
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    @property
    def spec(self) -> FieldSpec:
        return self.num.spec

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.spec != self.spec:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, int):
            return self.spec.const(other)
        if isinstance(other, Poly):
            return RatFunc(other, other.spec._poly_one)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den is other.den or self.den == other.den:
            return RatFunc.make(self.num + other.num, self.den)
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

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
        return RatFunc.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero field element")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return self.spec.one() / self ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc.make(self.den, self.num)

    # -- characteristic-p structure -------------------------------------

    def frobenius(self, k: int = 1) -> "RatFunc":
        """The p^k-th power; stays reduced and monic, so no renormalization."""
        if k == 0:
            return self
        return RatFunc(self.num.frobenius(k), self.den.frobenius(k))

    def pth_root(self):
        """Return b with b^p = self, or None."""
        rn = self.num.pth_root()
        if rn is None:
            return None
        rd = self.den.pth_root()
        if rd is None:
            return None
        return RatFunc(rn, rd)

    def lambda0(self) -> "RatFunc":
        r = self.pth_root()
        return r if r is not None else self.spec.zero()

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.const(other)
        elif isinstance(other, Poly):
            other = RatFunc(other, other.spec._poly_one)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __bool__(self):
        return not self.num.is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        num_s = str(self.num)
        den_s = str(self.den)
        if " " in num_s:
            num_s = f"({num_s})"
        if " " in den_s or "*" in den_s:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# module-level operations in the shapes the rest of the package expects
# ---------------------------------------------------------------------------


def field_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    """Dispatch one of add/sub/mul/div on two field elements."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(a: RatFunc, k: int) -> RatFunc:
    if k < 0:
        raise ValueError("negative Frobenius power")
    return a.frobenius(k)


def pth_root(a: RatFunc):
    return a.pth_root()


def lambda0(a: RatFunc) -> RatFunc:
    return a.lambda0()


def partial_t(f: Poly, i: int) -> Poly:
    if not 0 <= i < f.spec.k:
        raise ValueError(f"generator index {i} out of range")
    return f.partial(i)


def subfield_coords(a: RatFunc, e: int) -> dict:
    """Coordinates of a over the subfield K^(p^e) in the monomial basis t^b.

    Returns a map from residue exponent vectors b (all entries < p^e) to the
    p^e-th roots of the actual coordinates, i.e. values r with
    a = sum_b t^b * r^(p^e).  For e = 0 this is just {0: a}.
    """
    spec = a.spec
    if e < 0:
        raise ValueError("negative subfield power")
    if e == 0:
        return {(0,) * spec.k: a}
    pe = spec.p ** e
    num = a.num * a.den ** (pe - 1)
    buckets = {}
    for exps, c in num.terms.items():
        b = tuple(x % pe for x in exps)
        root = tuple((x - r) // pe for x, r in zip(exps, b))
        buckets.setdefault(b, {})[root] = c
    out = {}
    for b, terms in buckets.items():
        out[b] = RatFunc.make(Poly(spec, terms), a.den)
    return out
