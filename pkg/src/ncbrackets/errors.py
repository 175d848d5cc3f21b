"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine failures."""


class RankError(EngineError):
    """Mixed-rank tensor arithmetic or an operand of the wrong rank."""


class SlotIndexError(EngineError):
    """Jump count outside the valid range for a tensor rank."""


class SortError(EngineError):
    """Generator declared or used with an inconsistent sort/jet."""


class WeightError(EngineError):
    """Operand outside the weight range an operation is defined on."""


class MissingGeneratorError(EngineError):
    """A symbol that no table knows about."""


class LambdaCapError(EngineError):
    """Polynomial degree in lambda/mu exceeded the configured cap."""


class GradingError(EngineError):
    """A graded table violates the weight bookkeeping."""


class DimensionCapError(EngineError):
    """Matrix size N beyond the supported cap."""


class PresentationError(EngineError):
    """Malformed presentation file; carries a position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
