"""Exception hierarchy shared by every layer of the package."""


class ItercompareError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class InputError(ItercompareError, ValueError):
    """Rejected input: dimension mismatch, empty overlap, misaligned traces."""


class ExprSyntaxError(ItercompareError, ValueError):
    """Malformed expression, carrying the byte offset of the offending token."""

    def __init__(self, message: str, offset: int, source: str = ""):
        self.message = message
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")

    def caret(self) -> str:
        return f"{self.source}\n{' ' * self.offset}^"


class EvaluationError(ItercompareError, ArithmeticError):
    """Non-finite or undefined value produced while evaluating an expression."""


class GenerationError(ItercompareError):
    """Iteration could not proceed (schedule out of range, operator failure)."""


class BoundViolationError(ItercompareError):
    """A bound sequence failed validation; ``check`` holds the violation."""

    def __init__(self, message: str, check=None):
        self.check = check
        super().__init__(message)


class ConfigError(ItercompareError):
    """Schema violation or semantic error in an experiment file."""
