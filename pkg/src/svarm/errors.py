"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside its mathematical domain."""


class DimensionMismatch(ValueError):
    """A coalition's width differs from the game's player count."""


class BudgetExhausted(RuntimeError):
    """A paid evaluation was requested after the metered budget ran out."""


class BudgetTooSmall(ValueError):
    """The requested budget is below the algorithm's minimum."""


class TooLarge(ValueError):
    """The player count exceeds a brute-force feasibility guard."""


class Unsupported(TypeError):
    """The operation is not defined for this game type."""


class ParseError(ValueError):
    """A table file line could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValueMissing(ParseError):
    """A table file does not cover every coalition bitmask."""


class NonZeroEmptySet(ValueError):
    """A game assigns a nonzero worth to the empty coalition."""


class BridgeProtocolError(RuntimeError):
    """The remote value-function peer violated the bridge protocol."""


class NoReference(ValueError):
    """No ground-truth Shapley values are obtainable for this game."""
