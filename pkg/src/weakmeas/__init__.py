"""Weak quantum measurement simulation.

Coupled-system weak measurement protocol, weak value formulas, concrete
meter constructions, exact and Monte Carlo oracles, and an experiment
runner CLI.
"""

from .hilbert import (
    DensityMatrix,
    DimensionMismatchError,
    HermiticityError,
    Observable,
    SpectralDecomposition,
    StateVector,
    eig_hermitian,
    evolve,
    evolve_coupling,
    expectation,
    inner,
    partial_trace_meter,
    projector,
    tensor_op,
    tensor_state,
    trace_distance,
)
from .meters import (
    GridSpec,
    chirped_gaussian_state,
    gaussian_grid_meter,
    momentum_operator,
    position_operator,
    qubit_meter,
)
from .oracle import (
    EstimateWithError,
    MonteCarloRun,
    OutcomeTable,
    exact_outcome_distribution,
    monte_carlo_conditional_mean,
    monte_carlo_run,
    projective_A_oracle,
)
from .protocol import (
    CalibrationError,
    EmptyPostselectionError,
    EpsSchedule,
    ExtrapolationResult,
    MeterSpec,
    UndefinedWeakValueError,
    WeakSetup,
    WeakValueReport,
    aav_complex_weak_value,
    conditional_expectation,
    coupled_state,
    coupling_moment,
    disturbance,
    meter_reading,
    postselection_probability,
    projective_conditional_expectation,
    richardson_limit,
    traditional_weak_value,
    unconditional_limit,
    verify_calibration,
    weak_value_closed_form,
    weak_value_extrapolation,
    weak_value_numeric,
    weak_value_report,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "DensityMatrix",
    "DimensionMismatchError",
    "EmptyPostselectionError",
    "EpsSchedule",
    "EstimateWithError",
    "ExtrapolationResult",
    "GridSpec",
    "HermiticityError",
    "MeterSpec",
    "MonteCarloRun",
    "Observable",
    "OutcomeTable",
    "SpectralDecomposition",
    "StateVector",
    "UndefinedWeakValueError",
    "WeakSetup",
    "WeakValueReport",
    "aav_complex_weak_value",
    "chirped_gaussian_state",
    "conditional_expectation",
    "coupled_state",
    "coupling_moment",
    "disturbance",
    "eig_hermitian",
    "evolve",
    "evolve_coupling",
    "exact_outcome_distribution",
    "expectation",
    "gaussian_grid_meter",
    "inner",
    "meter_reading",
    "momentum_operator",
    "monte_carlo_conditional_mean",
    "monte_carlo_run",
    "partial_trace_meter",
    "position_operator",
    "postselection_probability",
    "projective_A_oracle",
    "projective_conditional_expectation",
    "projector",
    "qubit_meter",
    "richardson_limit",
    "tensor_op",
    "tensor_state",
    "trace_distance",
    "traditional_weak_value",
    "unconditional_limit",
    "verify_calibration",
    "weak_value_closed_form",
    "weak_value_extrapolation",
    "weak_value_numeric",
    "weak_value_report",
    "__version__",
]
