"""detbal: verification toolkit for quantum detailed balance in finite dimension.

The package decides whether a quantum channel is balanced with respect to a
faithful state, using several independent characterizations (dual maps,
modular commutation, two-copy correlation identities, mirror operators) and
cross-checking them against each other.  Everything is finite-dimensional
and numpy-backed.
"""

from .balance import (
    MODE_CP,
    MODE_POSITIVITY,
    BalanceReport,
    ClassicalChain,
    check_db2_definition,
    check_db2_entangled,
    check_db2_modular,
    check_implication_sqdb_db2,
    check_sqdb_definition,
    check_sqdb_entangled,
    classical_detailed_balance,
    classical_phi_balance,
    delta_commutator_residual,
    in_deadband,
    make_chain,
    require_dynamics,
    run_report,
)
from .duals import (
    ModularFamily,
    ReversingOperation,
    bar_map,
    hat_map,
    hs_adjoint,
    kms_dual,
    make_reversing,
    modular,
    modular_power,
    rho_dual,
    theta_conjugate,
    trace_dual,
    transpose_reversing,
)
from .errors import (
    DetbalError,
    DimensionMismatch,
    InputNotDynamics,
    NonUnitary,
    NotDensity,
    NotHermitian,
    NotInvertible,
    NotInvolutive,
    NotStochastic,
    SchemaError,
)
from .generators import (
    cycle_chain,
    degenerate_db2_channel,
    gad_kraus,
    gad_sqdb_channel,
    metropolis_chain,
    random_density,
    random_unital_channel,
    random_unital_kraus,
    random_unitary,
    schur_db2_channel,
    schur_kraus,
    schur_multiplier_matrix,
    symmetrized_sqdb_channel,
)
from .linalg import (
    DEFAULT_TOL,
    CheckResult,
    EigenDecomposition,
    Tolerance,
    as_matrix,
    hermitian_eig,
    hs_inner,
    hs_norm,
    is_psd,
    mat_power,
    matrix_unit,
    matrix_units,
    require_hermitian,
)
from .states import (
    DensityMatrix,
    DiagonalCorrelatedState,
    Purification,
    expectation,
    make_density,
    marginals_check,
    omega_eval,
    purify,
    theta_eval,
)
from .superop import (
    ChoiMatrix,
    KrausChannel,
    SuperOperator,
    choi,
    from_kraus,
    identity_superop,
    is_completely_positive,
    is_hermitian_map,
    is_positive_map,
    is_unital,
    make_kraus,
    pi_rep,
    transpose_superop,
    unvec,
    vec,
)
from .thermofield import (
    TildeOperator,
    check_db2_tfd,
    check_kms,
    check_sqdb_tfd,
    check_tilde_substitution,
    expect_tilde,
    tilde,
)

__version__ = "0.1.0"

__all__ = [
    "BalanceReport",
    "CheckResult",
    "ChoiMatrix",
    "ClassicalChain",
    "DEFAULT_TOL",
    "DensityMatrix",
    "DetbalError",
    "DiagonalCorrelatedState",
    "DimensionMismatch",
    "EigenDecomposition",
    "InputNotDynamics",
    "KrausChannel",
    "MODE_CP",
    "MODE_POSITIVITY",
    "ModularFamily",
    "NonUnitary",
    "NotDensity",
    "NotHermitian",
    "NotInvertible",
    "NotInvolutive",
    "NotStochastic",
    "Purification",
    "ReversingOperation",
    "SchemaError",
    "SuperOperator",
    "TildeOperator",
    "Tolerance",
    "as_matrix",
    "bar_map",
    "check_db2_definition",
    "check_db2_entangled",
    "check_db2_modular",
    "check_db2_tfd",
    "check_implication_sqdb_db2",
    "check_kms",
    "check_sqdb_definition",
    "check_sqdb_entangled",
    "check_sqdb_tfd",
    "check_tilde_substitution",
    "choi",
    "classical_detailed_balance",
    "classical_phi_balance",
    "cycle_chain",
    "degenerate_db2_channel",
    "delta_commutator_residual",
    "expect_tilde",
    "expectation",
    "from_kraus",
    "gad_kraus",
    "gad_sqdb_channel",
    "hat_map",
    "hermitian_eig",
    "hs_adjoint",
    "hs_inner",
    "hs_norm",
    "identity_superop",
    "in_deadband",
    "is_completely_positive",
    "is_hermitian_map",
    "is_positive_map",
    "is_psd",
    "is_unital",
    "kms_dual",
    "make_chain",
    "make_density",
    "make_kraus",
    "make_reversing",
    "marginals_check",
    "mat_power",
    "matrix_unit",
    "matrix_units",
    "metropolis_chain",
    "modular",
    "modular_power",
    "omega_eval",
    "pi_rep",
    "purify",
    "random_density",
    "random_unital_channel",
    "random_unital_kraus",
    "random_unitary",
    "require_dynamics",
    "require_hermitian",
    "rho_dual",
    "run_report",
    "schur_db2_channel",
    "schur_kraus",
    "schur_multiplier_matrix",
    "symmetrized_sqdb_channel",
    "theta_conjugate",
    "theta_eval",
    "tilde",
    "trace_dual",
    "transpose_reversing",
    "transpose_superop",
    "unvec",
    "vec",
]
