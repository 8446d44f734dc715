"""Exception types shared across the package."""


class TfschroError(Exception):
    """Base class for all package-specific failures."""


class GammaPoleError(TfschroError, ValueError):
    """Gamma function requested at a non-positive integer."""


class MLConvergenceError(TfschroError, ArithmeticError):
    """Mittag-Leffler series failed to meet its tail bound within the term cap."""


class MLOverflowError(TfschroError, OverflowError):
    """Exponential branch of the Mittag-Leffler asymptotics exceeds double range."""


class PrecisionBudgetError(TfschroError, ArithmeticError):
    """Extended-precision oracle would need more working digits than allowed."""


class QuadratureError(TfschroError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""


class OverflowHorizonError(TfschroError, OverflowError):
    """Requested time lies beyond the exponential-growth overflow horizon."""


class WrongRegimeError(TfschroError, ValueError):
    """Operation called with indices outside the regime it applies to."""


class DegenerateFitError(TfschroError, ValueError):
    """Regression input is degenerate (too few points, non-positive values...)."""


class ConfigError(TfschroError, ValueError):
    """Experiment configuration failed validation."""


class MeshTooCoarseWarning(UserWarning):
    """Graded-mesh refinement check suggests the discretization is under-resolved."""
