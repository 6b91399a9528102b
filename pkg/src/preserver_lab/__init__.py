"""Canonical determinant/trace preserving matrix maps.

Library + CLI for the matrix-preserver tool chain: canonical map forms on
the classical matrix classes, seeded numerical verification of the
determinant/trace identities they satisfy, supporting oracles
(Minkowski determinant inequality, adjugate derivative formula,
Kadison/Choi operator inequalities, trace dual witnesses), and recovery
of canonical parameters from black-box maps.
"""

from .core_linalg import (
    adjugate,
    as_square_matrix,
    determinant,
    hermitian_eig,
    matrix_from_json,
    matrix_residual,
    matrix_to_json,
    numeric_rank,
    pd_sqrt,
    principal_root,
    scalar_residual,
    takagi_factor,
)
from .domains import MatrixClass, basis, contains, dual_witness, mix_seed, sample, sample_invertible
from .errors import (
    DegenerateUnit,
    DimensionMismatch,
    FactorizationError,
    NotCanonical,
    NotHermitian,
    NotLinear,
    NotPositiveDefinite,
    NotRankOne,
    NotStarForm,
    NotUnital,
    PreserverLabError,
    SingularUnit,
    WitnessNotFound,
    ZeroInput,
)
from .mapspec import preserver_to_spec, realize_map, recovery_to_json, spec_to_preserver
from .preservers import (
    CanonicalPreserver,
    PreserverForm,
    apply_preserver,
    gauge_residual,
    pinching,
    random_canonical,
    remark1_map,
)
from .recovery import (
    LinearRep,
    build_linear_rep,
    choi_matrix,
    rank_one_split,
    recover,
    roundtrip_residual,
)
from .verifiers import (
    JacobiCheck,
    KadisonChoiReport,
    MinkowskiCheck,
    VerificationReport,
    check_homogeneity_additivity,
    check_jacobi,
    check_kadison_choi,
    check_minkowski,
    unitalize,
    verify_det_identity,
    verify_trace_identity,
)

__version__ = "0.1.0"
