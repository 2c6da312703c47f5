"""Twisted derivations on rational function fields and their extensions.

A derivation of twist order n >= 1 is an additive map with
d(xy) = x^q d(y) + y^q d(x), q = p^n.  On a purely transcendental field
any assignment of generator images determines a unique such map; towers
add inseparable generators s with s^(p^e) in the base, and separable
extensions adjoin a root of a separable minimal polynomial, where the
image of the root is forced.

Constants (kernel elements), strictness witnesses, composition, and
linear disjointness over an explicitly described subfield live here too.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_field import FieldSpec, Poly, RatFunc, poly_gcd, subfield_coords
from .errors import (
    BadBasis,
    BasisViolation,
    DivisionByZero,
    FieldMismatch,
    NotSeparable,
)
from .kpoly import KPoly, upoly_divmod, upoly_gcd, upoly_invmod
from .linalg import nullspace, solve


class FrobDerivation:
    """Twist order n plus one image per field generator."""

    __slots__ = ("n", "field", "images")

    def __init__(self, n: int, field: FieldSpec, images: dict):
        if n < 1:
            raise ValueError("twist order must be a positive integer")
        self.n = n
        self.field = field
        fixed = {}
        for name in field.generators:
            if name not in images:
                raise ValueError(f"missing image for generator {name!r}")
            img = images[name]
            if isinstance(img, int):
                img = field.const(img)
            if img.spec != field:
                raise FieldMismatch(f"image of {name!r} lives in a different field")
            fixed[name] = img
        self.images = fixed

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.p ** self.n

    def zero(self) -> RatFunc:
        return self.field.zero()

    def one(self) -> RatFunc:
        return self.field.one()

    def _derive_poly(self, f: Poly) -> RatFunc:
        q = self.q
        spec = self.field
        total = spec.zero()
        for exps, c in f.terms.items():
            for i, a in enumerate(exps):
                coeff = (c * a) % spec.p
                if not coeff:
                    continue
                image = self.images[spec.generators[i]]
                if not image:
                    continue
                mono = list(exps)
                mono[i] -= 1
                scaled = Poly(spec, {tuple(e * q for e in mono): coeff})
                total = total + RatFunc(scaled, spec._poly_one) * image
        return total

    def derive_fraction(self, num: Poly, den: Poly) -> RatFunc:
        """Apply the map to num/den without reducing the pair first."""
        du = self._derive_poly(num)
        dv = self._derive_poly(den)
        q = self.q
        vq = RatFunc.make(den.frobenius(self.n), self.field._poly_one)
        uq = RatFunc.make(num.frobenius(self.n), self.field._poly_one)
        return (vq * du - uq * dv) / (vq * vq)

    def derive(self, a: RatFunc) -> RatFunc:
        if isinstance(a, Poly):
            a = RatFunc(a, a.spec._poly_one)
        if a.spec != self.field:
            raise FieldMismatch("element of a different field")
        if a.den.is_one():
            return self._derive_poly(a.num)
        return self.derive_fraction(a.num, a.den)

    def __repr__(self):
        imgs = ", ".join(f"d({g})={v}" for g, v in self.images.items())
        return f"FrobDerivation(n={self.n}, {imgs})"


class ComposedOperator:
    """Composition d1 after d2; satisfies the twisted rule of order m+n."""

    __slots__ = ("first", "second", "n", "field")

    def __init__(self, d1, d2):
        if d1.field != d2.field:
            raise FieldMismatch("composition over different fields")
        self.first = d1
        self.second = d2
        self.n = d1.n + d2.n
        self.field = d1.field

    @property
    def p(self):
        return self.field.p

    @property
    def q(self):
        return self.field.p ** self.n

    def derive(self, a):
        return self.first.derive(self.second.derive(a))

    def __call__(self, a):
        return self.derive(a)


def compose(d1: FrobDerivation, d2: FrobDerivation) -> ComposedOperator:
    return ComposedOperator(d1, d2)


def is_constant(d, a) -> bool:
    """True when the operator kills a; d may be a derivation, tower or composition."""
    return not d.derive(a)


@dataclass(frozen=True)
class StrictnessVerdict:
    kind: str  # "NonStrictWitness" or "ConsistentWithStrict"
    element: object

    def __str__(self):
        return self.kind


def strictness_witness(d, a: RatFunc) -> StrictnessVerdict:
    """Report whether a witnesses constants beyond the p-th powers."""
    if is_constant(d, a) and a.pth_root() is None:
        return StrictnessVerdict("NonStrictWitness", a)
    return StrictnessVerdict("ConsistentWithStrict", a)


# ---------------------------------------------------------------------------
# towers of purely inseparable generators
# ---------------------------------------------------------------------------


class TowerSpec:
    """Base derivation plus generators s_j with s_j^(p^e_j) in the base.

    Elements are stored in the monomial basis s^a with 0 <= a_j < p^(e_j).
    The listed relations are taken at face value beyond a cheap properness
    check (each value must not be a p-th power in the base field).
    """

    __slots__ = ("deriv", "gens", "exponents", "values", "images", "_index")

    def __init__(self, deriv: FrobDerivation, gens, images: dict = None):
        self.deriv = deriv
        names = []
        exps = []
        vals = []
        spec = deriv.field
        for name, e, w in gens:
            if e < 1:
                raise BasisViolation(f"tower exponent for {name!r} must be >= 1")
            if name in spec.generators or name in names:
                raise BasisViolation(f"tower generator {name!r} clashes")
            if isinstance(w, int):
                w = spec.const(w)
            if not w:
                raise BasisViolation(f"tower value for {name!r} is zero")
            if w.pth_root() is not None:
                raise BasisViolation(f"tower value for {name!r} is a p-th power in the base")
            names.append(name)
            exps.append(e)
            vals.append(w)
        self.gens = tuple(names)
        self.exponents = tuple(exps)
        self.values = tuple(vals)
        self._index = {n: i for i, n in enumerate(names)}
        # images may mention the tower generators themselves, so callers
        # that build elements first can defer the assignment
        self.images = None
        if images is not None:
            self.set_images(images)

    def set_images(self, images: dict):
        if self.images is not None:
            raise ValueError("tower images are already set")
        fixed = {}
        for name in self.gens:
            if name not in images:
                raise ValueError(f"missing tower image for {name!r}")
            fixed[name] = self.promote(images[name])
        self.images = fixed

    @property
    def field(self) -> FieldSpec:
        return self.deriv.field

    @property
    def p(self):
        return self.field.p

    @property
    def n(self):
        return self.deriv.n

    @property
    def q(self):
        return self.deriv.q

    def bound(self, j: int) -> int:
        return self.p ** self.exponents[j]

    @property
    def dim(self) -> int:
        out = 1
        for j in range(len(self.gens)):
            out *= self.bound(j)
        return out

    def basis_monomials(self):
        """All reduced exponent tuples, ordered lexicographically."""
        out = [()]
        for j in range(len(self.gens)):
            out = [e + (a,) for e in out for a in range(self.bound(j))]
        return out

    # -- element constructors ------------------------------------------------

    def zero(self) -> "TowerElement":
        return TowerElement(self, {})

    def one(self) -> "TowerElement":
        return TowerElement(self, {(0,) * len(self.gens): self.field.one()})

    def promote(self, value) -> "TowerElement":
        if isinstance(value, TowerElement):
            if value.tower is not self:
                raise FieldMismatch("element of a different tower")
            return value
        if isinstance(value, int):
            value = self.field.const(value)
        if isinstance(value, Poly):
            value = RatFunc(value, value.spec._poly_one)
        if not value:
            return self.zero()
        return TowerElement(self, {(0,) * len(self.gens): value})

    def gen(self, name: str) -> "TowerElement":
        e = [0] * len(self.gens)
        e[self._index[name]] = 1
        return TowerElement(self, {tuple(e): self.field.one()})

    def element(self, coeffs: dict) -> "TowerElement":
        out = {}
        for exps, c in coeffs.items():
            exps = tuple(exps)
            if len(exps) != len(self.gens) or any(a < 0 for a in exps):
                raise BasisViolation(f"bad tower exponent vector {exps!r}")
            if isinstance(c, int):
                c = self.field.const(c)
            _accumulate_reduced(self, out, exps, c)
        return TowerElement(self, out)

    # -- the derivation ----------------------------------------------------

    def derive(self, z) -> "TowerElement":
        if self.images is None:
            raise ValueError("tower images are not set yet")
        z = self.promote(z)
        q = self.q
        total = self.zero()
        for exps, c in z.coeffs.items():
            dc = self.deriv.derive(c)
            if dc:
                total = total + TowerElement.make(
                    self, {tuple(a * q for a in exps): dc})
            cq = c.frobenius(self.n)
            for j, a in enumerate(exps):
                coeff = a % self.p
                if not coeff:
                    continue
                image = self.images[self.gens[j]]
                if not image:
                    continue
                mono = list(exps)
                mono[j] -= 1
                scaled = TowerElement.make(
                    self, {tuple(e * q for e in mono): cq * coeff})
                total = total + scaled * image
        return total

    def __repr__(self):
        rel = ", ".join(
            f"{g}^{self.bound(j)}={v}" for j, (g, v) in enumerate(zip(self.gens, self.values)))
        return f"TowerSpec({rel})"


def _accumulate_reduced(tower: TowerSpec, out: dict, exps, coeff):
    """Add coeff * s^exps to out, rewriting s_j^(p^e_j) -> value_j."""
    if not coeff:
        return
    reduced = list(exps)
    for j, a in enumerate(reduced):
        b = tower.bound(j)
        if a >= b:
            coeff = coeff * tower.values[j] ** (a // b)
            reduced[j] = a % b
    key = tuple(reduced)
    acc = out.get(key)
    acc = coeff if acc is None else acc + coeff
    if acc:
        out[key] = acc
    else:
        out.pop(key, None)


class TowerElement:
    """Element of the tower in the reduced monomial basis."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: TowerSpec, coeffs: dict):
        self.tower = tower
        self.coeffs = coeffs

    @classmethod
    def make(cls, tower: TowerSpec, raw: dict) -> "TowerElement":
        out = {}
        for exps, c in raw.items():
            _accumulate_reduced(tower, out, exps, c)
        return cls(tower, out)

    def is_zero(self):
        return not self.coeffs

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise FieldMismatch("elements of different towers")
            return other
        if isinstance(other, (int, RatFunc, Poly)):
            return self.tower.promote(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc = out.get(e)
            acc = c if acc is None else acc + c
            if acc:
                out[e] = acc
            else:
                out.pop(e, None)
        return TowerElement(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, {e: -c for e, c in self.coeffs.items()})

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
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                _accumulate_reduced(
                    self.tower, out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return TowerElement(self.tower, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def inverse(self) -> "TowerElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero tower element")
        tower = self.tower
        basis = tower.basis_monomials()
        index = {e: i for i, e in enumerate(basis)}
        zero = tower.field.zero()
        one = tower.field.one()
        # multiplication-by-self matrix in the monomial basis
        cols = []
        for e in basis:
            prod = self * TowerElement(tower, {e: one})
            col = [zero] * len(basis)
            for ee, c in prod.coeffs.items():
                col[index[ee]] = c
            cols.append(col)
        matrix = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
        rhs = [one if i == index[(0,) * len(tower.gens)] else zero
               for i in range(len(basis))]
        x = solve(matrix, rhs, zero, one)
        return TowerElement(tower, {basis[j]: x[j] for j in range(len(basis)) if x[j]})

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def frobenius(self, k: int = 1) -> "TowerElement":
        if k == 0:
            return self
        q = self.tower.p ** k
        out = {}
        for e, c in self.coeffs.items():
            _accumulate_reduced(
                self.tower, out, tuple(a * q for a in e), c.frobenius(k))
        return TowerElement(self.tower, out)

    def coords(self) -> list:
        """Coordinates over the base field, ordered by basis_monomials()."""
        zero = self.tower.field.zero()
        return [self.coeffs.get(e, zero) for e in self.tower.basis_monomials()]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return hash(frozenset((e, c) for e, c in self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.tower.gens
        parts = []
        for exps in sorted(self.coeffs, key=lambda e: (sum(e), e), reverse=True):
            c = self.coeffs[exps]
            factors = []
            for name, e in zip(names, exps):
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
        return f"TowerElement({self})"


def derive_tower(tw: TowerSpec, a) -> TowerElement:
    return tw.derive(a)


# ---------------------------------------------------------------------------
# separable extensions K[Z]/(f)
# ---------------------------------------------------------------------------


class SeparableExtension:
    """Simple separable extension with the forced derivation image of the root."""

    __slots__ = ("deriv", "minpoly", "d_alpha")

    def __init__(self, deriv: FrobDerivation, minpoly: KPoly):
        if len(minpoly.vars) != 1:
            raise ValueError("minimal polynomial must be univariate")
        fprime = minpoly.partial(0)
        if fprime.is_zero() or upoly_gcd(minpoly, fprime).degree_in(0) != 0:
            raise NotSeparable("minimal polynomial is not separable")
        self.deriv = deriv
        self.minpoly = minpoly
        # d(alpha) = -f^d(alpha^q) / f'(alpha)^q reduced modulo f
        q = deriv.q
        fd = minpoly.coeff_map(deriv.derive).stretch(q)
        fd_mod = upoly_divmod(fd, minpoly)[1]
        fp_q = upoly_divmod(fprime.frob_power(deriv.p, deriv.n), minpoly)[1]
        inv = upoly_invmod(fp_q, minpoly)
        self.d_alpha = SepElement(self, upoly_divmod(-fd_mod * inv, minpoly)[1])

    @property
    def field(self):
        return self.deriv.field

    @property
    def p(self):
        return self.deriv.p

    @property
    def n(self):
        return self.deriv.n

    @property
    def q(self):
        return self.deriv.q

    @property
    def degree(self):
        return self.minpoly.degree_in(0)

    @property
    def dim(self):
        return self.degree

    def zero(self):
        return SepElement(self, KPoly.zero(self.field, self.minpoly.vars))

    def one(self):
        return SepElement(self, KPoly.one(self.field, self.minpoly.vars))

    def alpha(self):
        return SepElement(
            self, upoly_divmod(KPoly.var(self.field, self.minpoly.vars,
                                         self.minpoly.vars[0]), self.minpoly)[1])

    def promote(self, value):
        if isinstance(value, SepElement):
            if value.ext is not self:
                raise FieldMismatch("element of a different extension")
            return value
        if isinstance(value, int):
            value = self.field.const(value)
        if isinstance(value, Poly):
            value = RatFunc(value, value.spec._poly_one)
        return SepElement(self, KPoly.const(self.field, self.minpoly.vars, value))

    def from_poly(self, g: KPoly):
        """Reduce a univariate polynomial in the root modulo the minimal polynomial."""
        return SepElement(self, upoly_divmod(g, self.minpoly)[1])

    def derive(self, z) -> "SepElement":
        """d(g(alpha)) = g^d(alpha^q) + g'(alpha)^q * d(alpha)."""
        z = self.promote(z)
        g = z.rep
        q = self.q
        gd = self.from_poly(g.coeff_map(self.deriv.derive).stretch(q))
        gp_q = self.from_poly(g.partial(0).frob_power(self.p, self.n))
        return gd + gp_q * self.d_alpha

    def basis_monomials(self):
        return list(range(self.degree))


class SepElement:
    """Element of a separable extension, reduced to degree < deg(minpoly)."""

    __slots__ = ("ext", "rep")

    def __init__(self, ext: SeparableExtension, rep: KPoly):
        self.ext = ext
        self.rep = rep

    def is_zero(self):
        return self.rep.is_zero()

    def _coerce(self, other):
        if isinstance(other, SepElement):
            if other.ext is not self.ext:
                raise FieldMismatch("elements of different extensions")
            return other
        if isinstance(other, (int, RatFunc, Poly)):
            return self.ext.promote(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return SepElement(self.ext, self.rep + other.rep)

    __radd__ = __add__

    def __neg__(self):
        return SepElement(self.ext, -self.rep)

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
        return self.ext.from_poly(self.rep * other.rep)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.ext.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def inverse(self):
        return SepElement(self.ext, upoly_invmod(self.rep, self.ext.minpoly))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def frobenius(self, k: int = 1):
        return self ** (self.ext.p ** k)

    def coords(self) -> list:
        zero = self.ext.field.zero()
        out = [zero] * self.ext.degree
        for (e,), c in self.rep.terms.items():
            out[e] = c
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.rep == other.rep

    def __bool__(self):
        return bool(self.rep)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"SepElement({self.rep})"


def extend_separable(d: FrobDerivation, minpoly: KPoly) -> SeparableExtension:
    """Extend d to K[Z]/(minpoly); the image of the root is forced."""
    return SeparableExtension(d, minpoly)


# ---------------------------------------------------------------------------
# linear disjointness reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubfieldSpec:
    """The subfield K^(p^e), presented with its monomial basis t^b, b < p^e."""

    power: int  # e >= 0; e = 0 means F = K

    def __post_init__(self):
        if self.power < 0:
            raise BadBasis("subfield Frobenius power must be >= 0")


@dataclass(frozen=True)
class DisjointnessReport:
    dependent_over_K: bool
    k_witness: tuple
    dependent_over_subfield: bool
    subfield_witness: tuple
    all_constants: bool


def _extension_coords(ext, x):
    if isinstance(ext, FrobDerivation):
        if isinstance(x, Poly):
            x = RatFunc(x, x.spec._poly_one)
        return [x]
    return ext.promote(x).coords()


def linear_disjointness_check(ext, elements, subfield: SubfieldSpec) -> DisjointnessReport:
    """Relation spaces of the given elements over K and over K^(p^e).

    ext is a TowerSpec, a SeparableExtension, or a plain FrobDerivation
    (in which case the ambient field is K itself).  Witnesses are the
    earliest nullspace basis vectors of the exact coordinate matrices,
    normalized so the free coordinate is one.
    """
    if not elements:
        raise BadBasis("need at least one element")
    deriv = ext if isinstance(ext, FrobDerivation) else ext.deriv
    spec = deriv.field
    zero, one = spec.zero(), spec.one()

    coords = [_extension_coords(ext, x) for x in elements]
    dim = len(coords[0])
    if any(len(c) != dim for c in coords):
        raise BadBasis("elements do not share the claimed monomial basis")

    all_constants = all(not ext.derive(x) for x in elements)

    # relations over K: nullspace of the (dim x r) coordinate matrix
    matrix = [[coords[j][i] for j in range(len(elements))] for i in range(dim)]
    k_basis = nullspace(matrix, zero, one)
    k_witness = tuple(k_basis[0]) if k_basis else ()

    # relations over the subfield: refine every K-coordinate over the
    # monomial basis of K over K^(p^e); entries are p^e-th roots of the
    # true coordinates, which is harmless for rank computations since
    # x -> x^(p^e) is a field isomorphism onto K^(p^e)
    e = subfield.power
    residues = sorted({b for col in coords for u in col for b in subfield_coords(u, e)})
    res_index = {b: i for i, b in enumerate(residues)}
    big = [[zero] * len(elements) for _ in range(dim * len(residues))]
    for j, col in enumerate(coords):
        for i, u in enumerate(col):
            if not u:
                continue
            for b, root in subfield_coords(u, e).items():
                big[i * len(residues) + res_index[b]][j] = root
    f_basis = nullspace(big, zero, one)
    if f_basis:
        subfield_witness = tuple(c.frobenius(e) for c in f_basis[0])
    else:
        subfield_witness = ()

    return DisjointnessReport(
        dependent_over_K=bool(k_basis),
        k_witness=k_witness,
        dependent_over_subfield=bool(f_basis),
        subfield_witness=subfield_witness,
        all_constants=all_constants,
    )
