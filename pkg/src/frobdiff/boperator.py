"""Finite algebras by structure constants and the operators they induce.

An algebra B over F_p comes with a basis b_0..b_d, b_0 = 1, and a
projection onto the b_0 coordinate.  A tuple of maps (id, d_1..d_d) on
the polynomial ring F_p[t_1..t_k] is an operator for B when the combined
map r -> sum_i d_i(r) (x) b_i is a unital ring homomorphism; with b_0 = 1
fixed in the basis, the kernel-of-all-d_i and fixed-point notions of
constants agree, and the operators are linear over the constants with no
Frobenius twist.

bop_apply extends generator images to the whole ring through the single
structure-constant product rule

    d_k(rs) = sum_{i,j} c^k_{ij} d_i(r) d_j(s),

which specializes to the Leibniz rule for dual numbers and to
multiplicativity of id + d_1 for the split product algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_field import FieldSpec, Poly
from .errors import FieldMismatch, NotValidated


@dataclass(frozen=True)
class AlgebraVerdict:
    ok: bool
    violations: tuple

    def __str__(self):
        return "OK" if self.ok else "; ".join(self.violations)


class AlgebraB:
    """Structure constants c^k_{ij} over F_p with distinguished basis b_0 = 1.

    products maps (i, j) with 1 <= i, j <= d to coefficient vectors of
    length d+1; products involving b_0 are filled in from the unit law.
    """

    __slots__ = ("p", "basis", "table", "_verdict")

    def __init__(self, p: int, basis, products: dict):
        self.p = p
        self.basis = tuple(basis)
        dim = len(self.basis)
        table = {}
        for i in range(dim):
            for j in range(dim):
                if i == 0 or j == 0:
                    unit = [0] * dim
                    unit[max(i, j)] = 1
                    table[(i, j)] = tuple(unit)
        for (i, j), vec in products.items():
            if not (1 <= i < dim and 1 <= j < dim):
                raise ValueError(f"product index {(i, j)} out of range")
            vec = tuple(c % p for c in vec)
            if len(vec) != dim:
                raise ValueError("product vectors must have one entry per basis element")
            table[(i, j)] = vec
        for i in range(1, dim):
            for j in range(1, dim):
                if (i, j) not in table:
                    raise ValueError(f"missing product b{i}*b{j}")
        self.table = table
        self._verdict = None

    @property
    def dim(self):
        return len(self.basis)

    def mul_vectors(self, u, v):
        """Multiply two coefficient vectors through the structure constants."""
        p = self.p
        out = [0] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = self.table[(i, j)]
                scale = ui * vj
                for k, ck in enumerate(c):
                    if ck:
                        out[k] = (out[k] + scale * ck) % p
        return tuple(out)

    def projection(self, vec):
        """The b_0 coordinate; an algebra homomorphism once validated."""
        return vec[0] % self.p

    def validate(self) -> AlgebraVerdict:
        if self._verdict is None:
            self._verdict = validate_algebra(self)
        return self._verdict


def _unit_vec(dim, i):
    out = [0] * dim
    out[i] = 1
    return tuple(out)


def validate_algebra(B: AlgebraB) -> AlgebraVerdict:
    """Exhaustive checks on basis elements: unit, commutativity,
    associativity, and the projection being a ring homomorphism."""
    violations = []
    dim = B.dim
    units = [_unit_vec(dim, i) for i in range(dim)]
    for i in range(dim):
        if B.mul_vectors(units[0], units[i]) != units[i]:
            violations.append(f"b0 is not a left unit on b{i}")
        if B.mul_vectors(units[i], units[0]) != units[i]:
            violations.append(f"b0 is not a right unit on b{i}")
    for i in range(dim):
        for j in range(i + 1, dim):
            if B.mul_vectors(units[i], units[j]) != B.mul_vectors(units[j], units[i]):
                violations.append(f"b{i}*b{j} != b{j}*b{i}")
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                left = B.mul_vectors(B.mul_vectors(units[i], units[j]), units[k])
                right = B.mul_vectors(units[i], B.mul_vectors(units[j], units[k]))
                if left != right:
                    violations.append(f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")
    for i in range(dim):
        for j in range(dim):
            prod = B.projection(B.mul_vectors(units[i], units[j]))
            if prod != (B.projection(units[i]) * B.projection(units[j])) % B.p:
                violations.append(f"projection is not multiplicative on b{i}*b{j}")
    return AlgebraVerdict(not violations, tuple(violations))


class BOperator:
    """Generator images for d_1..d_d on F_p[t_1..t_k], extended by the product rule."""

    __slots__ = ("algebra", "spec", "images")

    def __init__(self, algebra: AlgebraB, spec: FieldSpec, images: dict):
        if algebra.p != spec.p:
            raise FieldMismatch("algebra and polynomial ring have different characteristic")
        self.algebra = algebra
        self.spec = spec
        fixed = {}
        for name in spec.generators:
            if name not in images:
                raise ValueError(f"missing operator images for generator {name!r}")
            vec = list(images[name])
            if len(vec) != algebra.dim - 1:
                raise ValueError("one image per non-unit basis element required")
            fixed[name] = tuple(self._to_poly(v) for v in vec)
        self.images = fixed

    def _to_poly(self, v) -> Poly:
        if isinstance(v, int):
            return self.spec.poly_const(v)
        if isinstance(v, Poly):
            if v.spec != self.spec:
                raise FieldMismatch("image in a different polynomial ring")
            return v
        raise TypeError("operator images must be polynomials")

    def generator_vector(self, name: str):
        return (self.spec.poly_gen(name),) + self.images[name]


def bop_apply(op: BOperator, r: Poly):
    """All d+1 components of the operator on r; component 0 is r itself."""
    verdict = op.algebra.validate()
    if not verdict.ok:
        raise NotValidated(str(verdict))
    spec = op.spec
    dim = op.algebra.dim
    zero = spec._poly_zero
    total = [zero] * dim
    gen_vectors = {name: op.generator_vector(name) for name in spec.generators}

    def vmul(u, v):
        out = [zero] * dim
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            for j, vj in enumerate(v):
                if vj.is_zero():
                    continue
                c = op.algebra.table[(i, j)]
                prod = ui * vj
                for k, ck in enumerate(c):
                    if ck:
                        out[k] = out[k] + prod.scale(ck)
        return out

    for exps, coeff in r.terms.items():
        vec = [spec.poly_const(coeff)] + [zero] * (dim - 1)
        for gi, a in enumerate(exps):
            gvec = gen_vectors[spec.generators[gi]]
            for _ in range(a):
                vec = vmul(vec, gvec)
        total = [t + v for t, v in zip(total, vec)]
    return tuple(total)


def bop_constants(op: BOperator, r: Poly) -> bool:
    """True when every component beyond the zeroth vanishes on r."""
    components = bop_apply(op, r)
    return all(c.is_zero() for c in components[1:])
