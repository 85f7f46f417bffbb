"""Exception hierarchy.

Every construction or evaluation failure raises a subclass of
:class:`IntelligentStateError`. The class name doubles as the error marker
written by the command line tool (stderr and the scan ``status`` column).
"""


__all__ = [
    "IntelligentStateError",
    "InvalidParam",
    "OutOfValidRange",
    "NonPositiveSpectrum",
    "ZeroCoefficient",
    "SpectrumFileError",
    "NegativeVariance",
    "CaseTwoNoSolution",
    "NumericallySingular",
    "OutsideConvergenceDisc",
    "TruncationNotConverged",
    "DivergentSeries",
    "IndexOutOfRange",
    "VacuumUndefined",
]


class IntelligentStateError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParam(IntelligentStateError, ValueError):
    """A parameter lies outside its admissible range."""


class OutOfValidRange(IntelligentStateError, ValueError):
    """A nonlinearity function was evaluated past its validity range."""


class NonPositiveSpectrum(IntelligentStateError, ValueError):
    pass


class ZeroCoefficient(IntelligentStateError, ValueError):
    pass


class SpectrumFileError(IntelligentStateError, ValueError):
    """Malformed spectrum file; the message carries the 1-based line number."""


class NegativeVariance(IntelligentStateError, ArithmeticError):
    """A variance came out below the rounding floor (truncation too short)."""


class CaseTwoNoSolution(IntelligentStateError, ValueError):
    """lambda = -1 turns the problem into an eigenvalue problem of A^dagger."""


class NumericallySingular(IntelligentStateError, ValueError):
    pass


class OutsideConvergenceDisc(IntelligentStateError, ValueError):
    pass


class TruncationNotConverged(IntelligentStateError, ArithmeticError):
    pass


class DivergentSeries(TruncationNotConverged):
    """The z = 0 series has ratio magnitude >= 1 and cannot be normalized."""


class IndexOutOfRange(IntelligentStateError, IndexError):
    pass


class VacuumUndefined(IntelligentStateError, ZeroDivisionError):
    """Mandel Q requested for a state with no photons."""
