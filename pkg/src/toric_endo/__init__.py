"""Exact toolkit for endomorphisms of projectivized bundles on smooth toric varieties."""

from .builtin import builtin_fan, hirzebruch, product_of_lines, projective_space, resolve_fan
from .chern import (
    TruncatedClassPoly,
    appendix_identity,
    expand_pullback,
    inductive_step,
    lemma_coefficient,
    pn_tangent_obstruction,
    solve_alpha,
)
from .commonzero import CommonZeroVerdict, Witness, no_common_zero_charts, verify_witness
from .compositions import compositions, multinomial, poset_leq, unit
from .errors import (
    DegreeMismatch,
    DegreeTooSmall,
    HypothesisUnmet,
    InconsistentWall,
    InputError,
    InvalidFan,
    NonLinearImage,
    NonSimplicialFan,
    NotToric,
    ParseError,
    PosetViolation,
    SectionNotInSpace,
    ToricEndoError,
    UnboundedPolytope,
    VariableMismatch,
)
from .fiber import FiberPoly, extract_coeff, substitute
from .lattice import (
    Fan,
    FrobeniusPower,
    LatticeEndo,
    NotFound,
    ProductDecomposition,
    Wall,
    WallRelation,
    dual_chart_coordinates,
    find_walls,
    frobenius_power_analysis,
    wall_relation,
)
from .laurent import LaurentPoly
from .obstruction import (
    CompatInstance,
    NonexistenceCertificate,
    certify_variety,
    cotangent_certificate,
    tangent_certificate,
    verify_compat,
    verify_compat_cotangent,
    verify_compat_tangent,
)
from .semigroup import SemigroupRing, semigroup_member
from .sections import DivisorPolytope, SplitBundleSpec, ToricDivisor, h0, lattice_points, polytope_of, section_space
from .split import (
    BasedMapData,
    Cocycle,
    HirzebruchFamily,
    build_fiber_polys,
    classify_p1n_tangent,
    gluing_check,
    hirzebruch_enumerate,
    no_common_zero,
    torsion_example,
)
from .transition import (
    TransitionMatrix,
    closed_form_coeff,
    cotangent_jacobian,
    cotangent_key_coeffs,
    sym_action,
    tangent_jacobian,
)

__version__ = "0.1.0"
