"""Exception hierarchy shared by all modules."""


class RamrecError(Exception):
    """Base class for every error raised by the package."""

    #: short machine-readable reason used by the CLI
    reason = "error"


class DivisionByZero(RamrecError, ZeroDivisionError):
    reason = "division-by-zero"


class DivisionByZeroSeries(RamrecError, ZeroDivisionError):
    reason = "division-by-zero-series"


class TruncationUnderflow(RamrecError):
    """A computation needed a series coefficient beyond its known order."""

    reason = "truncation-underflow"


class TruncationError(RamrecError):
    """Recomputing at a higher truncation order changed a result."""

    reason = "truncation-mismatch"


class CurveError(RamrecError):
    reason = "invalid-curve"


class NoRamification(CurveError):
    reason = "no-ramification"


class CoincidentRamification(CurveError):
    reason = "coincident-ramification"


class UnsupportedAlgebraicLocus(CurveError):
    reason = "unsupported-algebraic-locus"


class DeckSolveFailure(CurveError):
    reason = "deck-solve-failure"


class DegenerateW02(RamrecError):
    reason = "degenerate-w02"


class ZeroOmega(RamrecError):
    reason = "zero-omega"


class EngineError(RamrecError):
    reason = "engine-error"


class ParseError(RamrecError):
    """Expression syntax error with the offending position."""

    reason = "parse-error"

    def __init__(self, message, position=0, expected=()):
        self.position = position
        self.expected = tuple(sorted(expected))
        if self.expected:
            message = f"{message} at position {position}; expected one of {', '.join(self.expected)}"
        else:
            message = f"{message} at position {position}"
        super().__init__(message)
