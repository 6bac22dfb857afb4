"""Fixed-point quantum search via pi/3 phase shifts.

Statevector simulation of the error-cubing composite U R_s U^H R_t U, its
database instantiation W R_0 W R_t W, the recursive multi-query extension,
the six-level phase-kickback oracle, and closed-form failure models for the
classical and quantum baselines under a uniform prior on the unmarked
fraction.
"""

from .ancilla import (
    ANCILLA_DIM,
    CompositeRegister,
    kickback_equivalence,
    modular_add_oracle,
    prepare_phase_ancilla,
)
from .baselines import (
    FailureModel,
    classical_failure,
    classical_model,
    classical_monte_carlo,
    mosca_failure,
    mosca_model,
    pi3_failure_closed_form,
    pi3_model,
    younes_failure,
    younes_model,
    younes_success,
)
from .fixedpoint import (
    MAX_RECURSION_DEPTH,
    PI_3,
    CompositeResult,
    SearchInstance,
    database_search,
    pi3_composite,
    predicted_final_state,
    recursive_composite,
    standard_amplification_iterate,
)
from .operators import (
    Composition,
    DenseUnitary,
    SelectivePhase,
    UnitaryOp,
    WalshHadamard,
    apply_adjoint,
    apply_dense,
    apply_selective_phase,
    apply_walsh_hadamard,
    haar_random_unitary,
    is_power_of_two,
    to_matrix,
    transition_probability,
    unitarity_deviation,
)
from .prior import (
    EpsilonPrior,
    RealizableGrid,
    discretized_expected_failure,
    integrate_polynomial,
    integrate_simulated,
    make_marked_set,
    sample_epsilon,
)
from .statevec import (
    MarkedSet,
    NormalizationError,
    StateVector,
    basis_state,
    fidelity,
    inner,
    random_state,
    sample_measurement,
    sample_measurements,
    subspace_probability,
)

__version__ = "0.1.0"

__all__ = [
    "ANCILLA_DIM", "CompositeRegister", "kickback_equivalence",
    "modular_add_oracle", "prepare_phase_ancilla",
    "FailureModel", "classical_failure", "classical_model", "classical_monte_carlo",
    "mosca_failure", "mosca_model", "pi3_failure_closed_form", "pi3_model",
    "younes_failure", "younes_model", "younes_success",
    "MAX_RECURSION_DEPTH", "PI_3", "CompositeResult", "SearchInstance",
    "database_search", "pi3_composite", "predicted_final_state",
    "recursive_composite", "standard_amplification_iterate",
    "Composition", "DenseUnitary", "SelectivePhase", "UnitaryOp", "WalshHadamard",
    "apply_adjoint", "apply_dense", "apply_selective_phase", "apply_walsh_hadamard",
    "haar_random_unitary", "is_power_of_two", "to_matrix",
    "transition_probability", "unitarity_deviation",
    "EpsilonPrior", "RealizableGrid", "discretized_expected_failure",
    "integrate_polynomial", "integrate_simulated", "make_marked_set", "sample_epsilon",
    "MarkedSet", "NormalizationError", "StateVector", "basis_state", "fidelity",
    "inner", "random_state", "sample_measurement", "sample_measurements",
    "subspace_probability",
]
