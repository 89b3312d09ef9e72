"""Exception hierarchy."""


class FrictionlessError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveParameter(FrictionlessError, ValueError):
    pass


class PositivityViolated(FrictionlessError, ValueError):
    """A scaling law reaches b(t) <= 0."""


class SingularSystem(FrictionlessError, ArithmeticError):
    pass


class NoBracket(FrictionlessError):
    """The phase-integral residual never changes sign over the scanned range."""


class BlowUp(FrictionlessError):
    """b(t) left the admissible window during ODE integration."""


class StepUnderflow(FrictionlessError):
    pass


class NegativeFrequencyRegion(FrictionlessError, ValueError):
    """omega^2 <= 0 where a real frequency is required."""


class DomainError(FrictionlessError, ValueError):
    pass


class NoSolution(FrictionlessError):
    """The bang-bang matching conditions have no root on the scan grid."""


class InvalidMode(FrictionlessError, ValueError):
    pass


class GridTooSmall(FrictionlessError):
    """Probability density reached the edge of the spatial grid."""


class NormDrift(FrictionlessError):
    pass


class GridMismatch(FrictionlessError, ValueError):
    pass
