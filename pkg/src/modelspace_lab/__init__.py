"""Numerical toolkit for model spaces, compressed shifts and C0(N) contractions."""

from . import tolerances
from .calculus import (
    NevanlinnaFunction,
    defect_classify,
    h_of,
    hermite_interpolant,
    inner_of,
    k_infinity_member,
    minimal_function,
    nevanlinna_apply,
)
from .commutant import (
    OperatorSpaceBasis,
    bicommutant_basis,
    commutant_basis,
    intertwiner_space,
    match_calculus,
    quasi_affinity_check,
)
from .errors import (
    BoundaryZeroError,
    DegenerateInputError,
    DivisibilityError,
    InterpolationError,
    InvalidInputError,
    MatchFailure,
    ModelSpaceLabError,
    NearPoleError,
    NotApplicableError,
    NotC0Error,
    NotFactorableError,
    NotInH2Error,
    NumericalFailure,
    OutOfDiskError,
    PoleError,
    SpanningFailure,
    WitnessFailure,
)
from .inner import (
    InnerFunction,
    SmirnovTriple,
    in_local_smirnov,
    inner_div,
    inner_eval,
    inner_gcd,
    inner_mul,
    inner_outer_factorize,
    relatively_prime,
    smirnov_canonical,
)
from .jordan import (
    JordanModel,
    MatrixInnerFunction,
    PotapovFactor,
    jordan_model,
    jordan_operator,
    minimal_function_from_theta,
    minors_order,
    model_operator,
    multiplicity,
    potapov_product,
    quasi_similarity_witness,
)
from .modelspace import (
    DirectSumSpace,
    ModelSpace,
    Operator,
    compressed_shift,
    compressed_shift_quadrature,
    direct_sum,
    embed_R,
    kernel_vector,
    project,
    quotient_Q,
    tm_basis_eval,
)
from .ratfun import (
    Polynomial,
    RationalFunction,
    RootSet,
    fejer_riesz,
    poly_roots,
    rat_arith,
)

__version__ = "0.1.0"
