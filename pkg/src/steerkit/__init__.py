"""Gaussian continuous-variable toolkit for damped coupled bosonic modes.

Builds linearized drift/diffusion models of a cavity--mirror--atom system,
solves for stationary covariances (Lyapunov equation), evaluates EPR
steering and entanglement criteria, cross-checks everything against
closed-form moments and stochastic trajectories, and reproduces the
package's reference figures from the command line.
"""

from .analytic import (
    Case1Moments,
    Case1Steering,
    Case2Moments,
    Case2Steering,
    CorrelationThresholds,
    case1_covariance,
    case1_moments,
    case2_covariance,
    case2_moments,
    steering_case1,
    steering_case2,
    thresholds_case1,
)
from .criteria import (
    EntanglementReport,
    SteeringReport,
    classify_steering,
    duan_simon,
    log_negativity,
    reid_steering,
)
from .errors import (
    DegenerateInputError,
    NumericalError,
    StabilityError,
    SteerkitError,
    UnsupportedModelError,
    UnsupportedParametersError,
    ValidationError,
)
from .langevin import EnsembleEstimate, SimulationConfig, noise_matrix, simulate, zscores
from .lyapunov import (
    CovarianceMatrix,
    residual,
    steady_state,
    symplectic_eigenvalues,
    symplectic_form,
)
from .model import (
    LinearModel,
    StabilityResult,
    SystemParams,
    build_full_nonrwa,
    build_full_rwa,
    build_reduced_a,
    build_reduced_b,
    stability,
)
from .sweeps import FIGURE_IDS, SweepSpec, SweepResult, figure_spec, reproduce_figure, run_sweep

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "SystemParams",
    "LinearModel",
    "StabilityResult",
    "build_full_rwa",
    "build_reduced_a",
    "build_reduced_b",
    "build_full_nonrwa",
    "stability",
    # lyapunov
    "CovarianceMatrix",
    "steady_state",
    "residual",
    "symplectic_form",
    "symplectic_eigenvalues",
    # analytic closed forms
    "Case1Moments",
    "Case2Moments",
    "Case1Steering",
    "Case2Steering",
    "CorrelationThresholds",
    "case1_moments",
    "case2_moments",
    "case1_covariance",
    "case2_covariance",
    "steering_case1",
    "steering_case2",
    "thresholds_case1",
    # criteria
    "SteeringReport",
    "EntanglementReport",
    "reid_steering",
    "duan_simon",
    "log_negativity",
    "classify_steering",
    # langevin
    "SimulationConfig",
    "EnsembleEstimate",
    "simulate",
    "noise_matrix",
    "zscores",
    # sweeps
    "SweepSpec",
    "SweepResult",
    "run_sweep",
    "figure_spec",
    "reproduce_figure",
    "FIGURE_IDS",
    # errors
    "SteerkitError",
    "ValidationError",
    "UnsupportedParametersError",
    "UnsupportedModelError",
    "DegenerateInputError",
    "StabilityError",
    "NumericalError",
]
