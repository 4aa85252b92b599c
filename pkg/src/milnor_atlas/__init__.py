"""Singular-point and fold-point analysis for Milnor fibrations of mixed polynomial pairs."""

__version__ = "0.1.0"

from .mixedpoly import (  # noqa: F401
    MixedMonomial,
    MixedPolynomial,
    WeightKind,
    WeightType,
    check_weighted,
    conjugate,
    detect_weights,
    euler_residual,
    evaluate,
    from_terms,
    parse,
    to_text,
    verify_polar_action,
    wirtinger,
)
from .newton import (  # noqa: F401
    Face,
    NewtonData,
    Witness,
    degeneracy_witness,
    face_and_degree,
    face_function,
    newton_data,
)
from .criteria import (  # noqa: F401
    DependenceReport,
    MfpmPair,
    SpherePoint,
    detect_common_polar,
    mfpm_singular_general,
    mfpm_singular_polar,
    torus_flow,
    v_field,
)
from .fold import (  # noqa: F401
    FoldReport,
    FoldVerdict,
    TangentBasis,
    assemble_M,
    classify_fold,
    goodness_witness,
    hessian_blocks,
    tangent_basis,
)
from .oracle import (  # noqa: F401
    FiberChart,
    RankReport,
    SphereChart,
    jacobian_fd,
    rank_with_gap,
    restricted_arg_hessian_fd,
    singular_for_pair_fd,
    singular_for_phase_fd,
)
from .search import (  # noqa: F401
    FoundPoint,
    SearchConfig,
    SingularLocusSample,
    find_singular_points,
    orbit_representative,
)
from .suites import SUITES, SuiteResult, run_suite  # noqa: F401
from .errors import (  # noqa: F401
    AtlasError,
    CorrectorError,
    DependentFrameError,
    HypothesisError,
    InputError,
    KZeroError,
    NotProportionalError,
    NumericalError,
    ParseError,
    StencilError,
    ZeroPolynomialError,
)
