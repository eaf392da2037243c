"""Exception types shared across the package."""


class SwallocError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(SwallocError):
    """A requested computation exceeds the configured desk-scale limits."""


class GuardViolation(SwallocError):
    """An oracle query referenced an item that has not arrived yet."""


class ModelViolation(SwallocError):
    """An online algorithm broke the information model (e.g. probed a
    future item on an adaptive oracle)."""


class GenerationError(SwallocError):
    """Instance generation failed (rejection sampling exhausted)."""


class ParseError(SwallocError):
    """Instance/matroid file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
