"""oscwigner: exact quantum-statistical dynamics of time-dependent
generalized oscillators.

The library solves the complex classical mode equation of the quadratic
Hamiltonian H = X(t) p^2/2 + Y(t)(pq+qp)/2 + Z(t) q^2/2, builds displaced
thermal Gaussian states on top of the Wronskian-normalized solutions, and
evaluates their Wigner functions, phase-space contour-ellipse geometry,
Bogoliubov coefficients and squeezing measures.  The exactly solvable tanh
frequency sweep (hypergeometric closed form) serves as the built-in
benchmark.
"""

from ._accel import NUMBA_ENABLED
from .errors import (AxisOrderingError, ConfigError, GammaPoleError,
                     Hyp2f1ConvergenceError, HyperbolicInvariantError,
                     IntegrationError, InvariantError, ModeError,
                     NormalizationError, OrientationError, OscwignerError,
                     ProfileError, SpecialFunctionError, WronskianDriftError)
from .profiles import (ClassicalTrajectory, CoefficientProfile,
                       asymptotic_frequencies, classical_trajectory,
                       coefficient_derivatives, coefficients)
from .specfun import (Hyp2f1Request, Hyp2f1Result, hyp2f1, hyp2f1_value,
                      log_gamma)
from .modes import (BogoliubovPair, GridModeSolution, ModeSolution,
                    StaticModeSolution, TanhModeSolution, alpha_coefficients,
                    alpha_pair, bogoliubov, integrate_mode, normalize_mode,
                    plane_wave_initial_data, static_mode, tanh_mode,
                    tanh_mode_solution, wronskian)
from .invariants import (CanonicalInvariant, QuadraticInvariant, canonicalize,
                         recompose)
from .gaussian import (EllipseForm, GaussianState, Moments, QuadraticForm,
                       coherent_center, covariance, density_matrix,
                       ellipse_canonical, ellipse_track, h_ellipse,
                       mean_occupation, nu_from_eccentricities,
                       nu_from_ellipse_forms, wigner,
                       wigner_from_density_matrix)
from .cli import (ScenarioConfig, check, load_preset, parse_config,
                  preset_names, run_scenario)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "AxisOrderingError", "ConfigError", "GammaPoleError",
    "Hyp2f1ConvergenceError", "HyperbolicInvariantError", "IntegrationError",
    "InvariantError", "ModeError", "NormalizationError", "OrientationError",
    "OscwignerError", "ProfileError", "SpecialFunctionError",
    "WronskianDriftError",
    "ClassicalTrajectory", "CoefficientProfile", "asymptotic_frequencies",
    "classical_trajectory", "coefficient_derivatives", "coefficients",
    "Hyp2f1Request", "Hyp2f1Result", "hyp2f1", "hyp2f1_value", "log_gamma",
    "BogoliubovPair", "GridModeSolution", "ModeSolution",
    "StaticModeSolution", "TanhModeSolution", "alpha_coefficients",
    "alpha_pair", "bogoliubov", "integrate_mode", "normalize_mode",
    "plane_wave_initial_data", "static_mode", "tanh_mode",
    "tanh_mode_solution", "wronskian",
    "CanonicalInvariant", "QuadraticInvariant", "canonicalize", "recompose",
    "EllipseForm", "GaussianState", "Moments", "QuadraticForm",
    "coherent_center", "covariance", "density_matrix", "ellipse_canonical",
    "ellipse_track", "h_ellipse", "mean_occupation",
    "nu_from_eccentricities", "nu_from_ellipse_forms", "wigner",
    "wigner_from_density_matrix",
    "ScenarioConfig", "check", "load_preset", "parse_config", "preset_names",
    "run_scenario",
]
