"""Exact SU(2) parametrization of driven two-level evolution."""
from .adiabatic import (
    AdiabaticEstimate,
    approx_amplitude,
    approx_probability,
    adiabaticity_report,
    epsilon_at,
    estimate,
    tan_theta0_estimate,
)
from .errors import (
    DegeneracyError,
    GridTooCoarseError,
    IntegrationError,
    NormalizationError,
    NumericalError,
    QuadratureError,
    SingularityError,
    SynthesisError,
    TwoLevelError,
)
from .evolution import (
    PropagatorTrajectory,
    build_propagator,
    compact_propagator,
    parametrized_trajectory,
    transition_amplitude_formula,
    transition_amplitude_general,
)
from .hamiltonian import (
    Eigenframe,
    HamiltonianTrajectory,
    eigenframe_at,
    h_dot_matrix_element,
    hamiltonian_matrix,
    load_trajectory_csv,
    tabulated_trajectory,
)
from .oracle import IntegratorConfig, compare_trajectories, integrate
from .parametrization import ParametrizationState, SlowParametrization, from_slow_params, parametrize
from .scenarios import (
    NoTransitionSpec,
    ScenarioSpec,
    following_family,
    sine_scenario,
    synthesize_no_transition,
    trivial_family,
    verify_no_transition,
)

__version__ = "0.1.0"
