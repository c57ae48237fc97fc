"""Exception hierarchy shared by the numerical modules."""


class WaveStabError(Exception):
    """Base class for all errors raised by wavestab."""


class DomainError(WaveStabError, ValueError):
    """An argument lies outside the admissible parameter domain."""


class OutOfRangeError(DomainError):
    """A period or speed lies outside the range covered by a wave family."""


class NoThresholdError(DomainError):
    """No finite threshold speed exists (unstable for every speed)."""


class NoSignChangeError(WaveStabError, ArithmeticError):
    """A root was requested but the function does not change sign."""


class DegenerateFormulaError(WaveStabError, ArithmeticError):
    """A closed-form expression hit a vanishing denominator."""


class GridSizeError(WaveStabError, ValueError):
    """Grid size is odd or too small."""


class SingularSolveError(WaveStabError, ArithmeticError):
    """Right-hand side is not orthogonal to the kernel of the operator."""


class EigenConvergenceError(WaveStabError, ArithmeticError):
    """An eigensolver returned pairs that fail the residual check."""
