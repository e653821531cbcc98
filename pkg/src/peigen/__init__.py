"""peigen: a classical simulator for probabilistic, ancilla-assisted
eigenstate preparation by measurement-conditioned cooling.

The protocol entangles a system register with one ancilla qubit through
W = exp[-i (H + gamma) sigma^x tau]; post-selecting the ancilla's 0 outcome
reweights the system's spectral weights toward low energies, and repeating
(with fixed or variationally optimized tau) converges to an eigenstate.
Lower eigenstates can be ejected first to target excited levels."""

from .cooling import (
    CoolingStepResult,
    CoolingTrace,
    ExactW,
    FixedStep,
    RunConfig,
    StageRecord,
    TrajectoryResult,
    TrotterW,
    Variational,
    cooling_step,
    eject,
    fixed_step_run,
    prepare_eigenstate,
    stochastic_trajectory,
    success_probability,
    trajectory_probabilities,
)
from .errors import (
    CertainFailureError,
    ConfigError,
    CutoffError,
    DimensionError,
    EigenDecompositionError,
    NegativeShiftWarning,
    PeigenError,
    TruncationLeakageError,
    UndefinedOperatorError,
    ValidationError,
)
from .models import (
    Custom,
    Exact,
    Fixed,
    HarmonicOscillator,
    Hubbard1D,
    NormBound,
    Rabi,
    SumHamiltonian,
    TargetLevel,
    basis_state,
    build_harmonic,
    build_hubbard_jw,
    build_model,
    build_rabi,
    exact_spectrum,
    gamma_for,
    hubbard_sector_label,
    hubbard_sector_minimum,
    thermal_state,
)
from .operators import (
    HermitianOperator,
    QuantumState,
    basis_vector,
    expectation,
    hermitian_matfunc,
    tensor_product,
    validate_and_normalize,
)
from .trotter import (
    JointUnitary,
    branch_unitaries,
    exact_W,
    kraus_blocks,
    trotter_W,
    trotter_error,
    verify_fig2a,
    verify_fig2b,
    wgamma_decompose,
)
from .variational import (
    MinimizeResult,
    OptimizerConfig,
    TrialRecord,
    minimize_stage,
    run,
    stage_objective,
    variational_run,
)

__version__ = "0.1.0"

__all__ = [
    "CertainFailureError",
    "ConfigError",
    "CoolingStepResult",
    "CoolingTrace",
    "Custom",
    "CutoffError",
    "DimensionError",
    "EigenDecompositionError",
    "Exact",
    "ExactW",
    "Fixed",
    "FixedStep",
    "HarmonicOscillator",
    "HermitianOperator",
    "Hubbard1D",
    "JointUnitary",
    "MinimizeResult",
    "NegativeShiftWarning",
    "NormBound",
    "OptimizerConfig",
    "PeigenError",
    "QuantumState",
    "Rabi",
    "RunConfig",
    "StageRecord",
    "SumHamiltonian",
    "TargetLevel",
    "TrajectoryResult",
    "TrialRecord",
    "TrotterW",
    "TruncationLeakageError",
    "UndefinedOperatorError",
    "ValidationError",
    "Variational",
    "basis_state",
    "basis_vector",
    "branch_unitaries",
    "build_harmonic",
    "build_hubbard_jw",
    "build_model",
    "build_rabi",
    "cooling_step",
    "eject",
    "exact_W",
    "exact_spectrum",
    "expectation",
    "fixed_step_run",
    "gamma_for",
    "hermitian_matfunc",
    "hubbard_sector_label",
    "hubbard_sector_minimum",
    "kraus_blocks",
    "minimize_stage",
    "prepare_eigenstate",
    "run",
    "stage_objective",
    "stochastic_trajectory",
    "success_probability",
    "tensor_product",
    "thermal_state",
    "trajectory_probabilities",
    "trotter_W",
    "trotter_error",
    "validate_and_normalize",
    "variational_run",
    "verify_fig2a",
    "verify_fig2b",
    "wgamma_decompose",
]
