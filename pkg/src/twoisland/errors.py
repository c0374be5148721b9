"""Exception types shared across the package."""


class TwoIslandError(Exception):
    """Base class for all package-specific errors."""


class CRangeError(TwoIslandError, ValueError):
    """Migration count c outside [1, min(M, N)]."""


class ProbRangeError(TwoIslandError, ValueError):
    """A mutation probability outside (0, 1), or a pair summing to >= 1."""


class KindMismatchError(TwoIslandError, ValueError):
    """Parameters supplied that the model kind does not accept."""


class DegreeOverflowError(TwoIslandError, ValueError):
    """Requested moment degree exceeds the configured maximum."""


class SingularSystemError(TwoIslandError, ArithmeticError):
    """A moment linear system was singular or numerically unsolvable."""


class DegenerateDenominatorError(TwoIslandError, ArithmeticError):
    """A closed-form denominator vanished for the supplied rates."""


class MTooSmallError(TwoIslandError, ValueError):
    """Seed-bank size M too small for the fourth-moment remainder (needs M >= 4)."""


class NonAbsorbingError(TwoIslandError, RuntimeError):
    """Dual-process simulation hit the step cap before absorbing."""


class NonConvergentError(TwoIslandError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConfigError(TwoIslandError, ValueError):
    """Invalid or incomplete run configuration."""
