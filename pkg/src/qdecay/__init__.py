"""Gate-level simulation of single- and two-qubit amplitude damping.

The package builds damping channels three ways (explicit unitaries, gate
decompositions, Kraus operators), checks them against each other and
against the Lindblad master equation, and reproduces the shot-sampled
decay experiments.
"""

from .channels import (
    GAMMA_T_MAX,
    KrausSet,
    Schedule,
    extract_kraus,
    gammas_two,
    kraus_single,
    kraus_two,
    rho_out_two,
    theta_single,
    thetas_two,
    time_from_theta_single,
    u_ad_single,
    u_ad_single_circuit,
    u_ad_two_circuit,
    u_ad_two_explicit,
)
from .experiment import (
    ExperimentConfig,
    VerifyReport,
    prepare_initial,
    run_collective,
    run_single,
    run_verify,
)
from .gates import (
    Circuit,
    GateSpec,
    apply_circuit,
    build_tau,
    circuit_unitary,
    controlled_unitary,
    decompose_c2ry,
    decompose_c3ry,
    decompose_ccv,
    single_gate,
    tau_target,
    verify_decomposition,
)
from .lindblad import (
    LindbladProblem,
    analytic_single,
    analytic_two,
    jz_expectation_single,
    jz_expectation_two,
    rk4_integrate,
)
from .linalg import (
    is_density_matrix,
    is_unitary,
    kron,
    partial_trace,
)
from .sampling import (
    ExperimentResult,
    PointResult,
    ShotRecord,
    average_and_variance,
    jz_single,
    jz_two,
    outcome_probs,
    round_stream,
    sample_counts,
)
from .spin import (
    BasisMap,
    SpinLabel,
    basis_map,
    bell_state,
    physical_spin_ops,
    relabel,
    spin_state,
    total_spin_ops,
    total_spin_squared,
)

__version__ = "0.1.0"
