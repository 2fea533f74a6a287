"""Q-solvable algebras in PBW normal form and their twisted-Laurent
fraction-field presentations, with per-step certificates."""

from .adjoint import (
    EigenComponent,
    NonDiagonalizable,
    SplitPolynomial,
    WeylCertificate,
    WeylCriterionWitness,
    ad,
    check_weyl_criterion,
    eigen_decompose,
    fa_roots,
    minimal_ad_polynomial,
    ore_left_shift,
    weyl_certificate,
)
from .algebra import AlgebraElement, PbwCounterexample, Presentation, Word, element_str
from .catalog import (
    CATALOG_NAMES,
    MultiParamSpec,
    RootDatum3,
    expected_twisted,
    quantum_matrices,
    quantum_weyl,
    uq_nplus_sl3,
)
from .errors import (
    DivisionByZero,
    FactorizationGap,
    InadmissiblePoint,
    Inconsistent,
    InvalidJordanPair,
    ParseError,
    QsolvError,
    RebaseFailure,
    SpecViolation,
    StageShapeViolation,
    UnknownName,
    ValidationFailed,
    WeylDetected,
    ZeroDenominator,
    ZeroElement,
    ZeroWitness,
)
from .gk import (
    Denominator,
    GkResult,
    GkStage,
    GkTrace,
    StageTrace,
    VerifyReport,
    admissible,
    first_vanishing_denominator,
    gk_step,
    gk_transform,
    specialize_presentation,
    verify_twisted,
)
from .scalars import (
    Assignment,
    GammaMonomial,
    ParameterSpace,
    Scalar,
    gamma_str,
    scalar_normalize,
    scalar_str,
)
from .textio import (
    dump_presentation,
    dump_result,
    load_presentation,
    load_result,
    parse_element,
    parse_gamma,
    parse_scalar,
    presentation_from_dict,
    presentation_to_dict,
    result_from_dict,
    result_to_dict,
)

__version__ = "0.1.0"
