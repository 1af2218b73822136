"""Affine Kac-Moody algebras ``L(g) + Cc + Cd``: brackets, Heisenberg real forms,
the Euclidean loop group and its geometry, and tame estimates on graded spaces."""

from .affine import AffineKacMoody, KMElement, KMType, classify_km_type, cocycle, km_bracket, km_metric
from .base_algebra import BaseAlgebra, abelian, construct_base_algebra, product, sl2, su2_realform
from .geometry import (
    DegeneratePlaneError,
    IndexResult,
    TruncationWindow,
    connection,
    curvature,
    gram_matrix,
    metric_index,
    sectional_curvature,
)
from .group import (
    BranchCutError,
    CosetRep,
    GroupElement,
    Stabilizer,
    bch4,
    coset_canonicalize,
    coset_slice,
    euclidean_stabilizer,
    geodesic,
    geodesic_symmetry,
    group_element,
    group_exp,
    group_identity,
    group_inverse,
    group_log,
    group_multiply,
)
from .heisenberg import (
    DerivedAlgebraIso,
    Epsilon,
    HeisenbergElement,
    Involution,
    MixedTypeError,
    NotClosedError,
    OsakaReport,
    check_involution,
    circle_conjugation,
    classify_real_form,
    compact_real_form,
    derived_algebra_iso,
    heisenberg_bracket,
    heisenberg_real_form,
    identity_involution,
    mixed_span,
    negation_involution,
    noncompact_real_form,
    osaka_validate,
)
from .laurent import LaurentPoly, lp_annulus_norm, lp_commutator_product, lp_multiply, parse_laurent
from .scalar import Backend, BackendMismatchError, GaussianRational
from .suites import SUITES, SuiteConfig, SuiteReport, run_suite
from .tame import GradedSequence, TameFit, check_l1_linf_equivalence, make_map, seq_norms, tame_fit

__version__ = "0.1.0"
