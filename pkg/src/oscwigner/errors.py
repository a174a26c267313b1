"""Exception hierarchy for oscwigner."""


class OscwignerError(Exception):
    """Base class for all library errors."""


class ProfileError(OscwignerError):
    """Invalid oscillator coefficient profile or out-of-domain query."""


class ModeError(OscwignerError):
    """Invalid mode solution or mode operation."""


class NormalizationError(ModeError):
    """Initial data cannot be brought to unit Wronskian."""


class WronskianDriftError(ModeError):
    """Integrated mode solution lost Wronskian conservation."""

    def __init__(self, message, max_drift=None, threshold=None):
        super().__init__(message)
        self.max_drift = max_drift
        self.threshold = threshold


class IntegrationError(OscwignerError):
    """Adaptive integrator failed (step underflow or step budget exceeded)."""


class SpecialFunctionError(OscwignerError):
    """Special-function evaluation failed."""


class GammaPoleError(SpecialFunctionError):
    """log-Gamma requested at a non-positive integer."""


class Hyp2f1ConvergenceError(SpecialFunctionError):
    """Hypergeometric series did not converge within the term cap."""


class InvariantError(OscwignerError):
    """Quadratic invariant cannot be canonicalized."""


class HyperbolicInvariantError(InvariantError):
    """B^2 <= |A|^2: the invariant is not bounded below, no thermal state."""


class OrientationError(InvariantError):
    """B < 0: negative-temperature orientation of the invariant."""


class AxisOrderingError(OscwignerError):
    """Ellipse pair has incompatible principal-axis ordering for the
    eccentricity-based squeezing formula."""


class ConfigError(OscwignerError):
    """Scenario configuration is malformed."""

    def __init__(self, message, field_path=None, line=None):
        detail = message
        if field_path:
            detail += f" [field: {field_path}" + (f", line {line}" if line else "") + "]"
        super().__init__(detail)
        self.field_path = field_path
        self.line = line
