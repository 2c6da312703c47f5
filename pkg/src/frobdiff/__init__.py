"""Exact symbolic computation with derivations of Frobenius powers.

The package implements the algebra of additive maps satisfying the
twisted product rule d(xy) = x^q d(y) + y^q d(x) with q = p^n on rational
function fields of characteristic p, together with the differential
polynomial ring they act on, prolongations of affine varieties, an
order-dropping elimination pipeline, a jet-expansion kit for recovering
Frobenius powers from annihilators, and finite structure-constant
operator algebras.
"""

from .base_field import (
    FieldSpec,
    Poly,
    RatFunc,
    field_arith,
    frobenius,
    lambda0,
    partial_t,
    poly_gcd,
    pth_root,
    subfield_coords,
)
from .boperator import AlgebraB, AlgebraVerdict, BOperator, bop_apply, bop_constants, validate_algebra
from .diffpoly import (
    DiffPoly,
    JetTuple,
    coeff_derive,
    delta,
    evaluate,
    order,
    separant,
    total_derivative_check,
)
from .frob_derivation import (
    ComposedOperator,
    DisjointnessReport,
    FrobDerivation,
    SeparableExtension,
    SepElement,
    StrictnessVerdict,
    SubfieldSpec,
    TowerElement,
    TowerSpec,
    compose,
    derive_tower,
    extend_separable,
    is_constant,
    linear_disjointness_check,
    strictness_witness,
)
from .geometry import (
    IdealGens,
    ProlongedIdeal,
    check_section,
    classical_tangent_part,
    prolong,
    twist_derive_poly,
)
from .kpoly import KPoly, kpoly_divexact, kpoly_gcd, upoly_divmod, upoly_gcd, upoly_invmod
from .primitive_element import (
    AnnihilatorPoly,
    UVContext,
    find_lambda,
    partial_identity_check,
    recover_power,
    twisted_jet_expand,
)
from .reduction import (
    Atom,
    EliminationResult,
    Lambda0Formula,
    PipelineReport,
    SearchConfig,
    SystemFG,
    TAdd,
    TConst,
    TDeriv,
    TLambda0,
    TMul,
    TPow,
    TVar,
    combine_system,
    coprime_reduce,
    formula_eval,
    gcd_eliminate,
    iter_candidates,
    lambda0_rewrite,
    pipeline_reduce,
    term_eval,
    wood_solve,
)
from . import errors

__version__ = "0.1.0"
