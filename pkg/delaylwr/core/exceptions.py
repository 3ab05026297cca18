# exceptions.py
"""Common exception classes for the delayed LWR simulator."""

from typing import Optional, Sequence


class SimulationException(Exception):
    """Base exception class for simulator operations.

    All configuration, numerical and I/O failures raised by the package
    derive from this class so the CLI can catch them in one place.
    """

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        """Initialize the exception.

        Args:
            message: Human-readable error message
            original_error: The original exception that caused this error, if any
        """
        super().__init__(message)
        self.message = message
        self.original_error = original_error

    def __str__(self) -> str:
        """Return string representation of the exception."""
        if self.original_error:
            return f"{self.message} (caused by: {type(self.original_error).__name__}: {self.original_error})"
        return self.message


class ConfigurationError(SimulationException):
    """Raised when a grid, velocity, solver or run configuration is invalid.

    The message names the violated invariant, e.g. a fixed time step that
    breaks the CFL condition against the initial data.
    """

    def __init__(self, message: str, invalid_value: Optional[object] = None,
                 validation_rule: Optional[str] = None, original_error: Optional[Exception] = None):
        """Initialize the exception.

        Args:
            message: Human-readable error message
            invalid_value: The value that failed validation, if applicable
            validation_rule: Description of the rule that was violated
            original_error: The original exception that caused this error, if any
        """
        super().__init__(message, original_error)
        self.invalid_value = invalid_value
        self.validation_rule = validation_rule


class DomainError(SimulationException):
    """Raised when a density outside the physical domain (rho < 0) is evaluated."""

    def __init__(self, message: str, value: Optional[float] = None, original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.value = value


class HistoryError(SimulationException):
    """Raised when the delay history is queried outside its retained window."""

    def __init__(self, message: str, step: Optional[int] = None,
                 window: Optional[Sequence[int]] = None, original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.step = step
        self.window = tuple(window) if window is not None else None


class NumericalError(SimulationException):
    """Raised when the stepper produces a non-finite density."""

    def __init__(self, message: str, step: Optional[int] = None, cell: Optional[int] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.step = step
        self.cell = cell

    def __str__(self) -> str:
        parts = [self.message]
        if self.step is not None:
            parts.append(f"step: {self.step}")
        if self.cell is not None:
            parts.append(f"cell: {self.cell}")
        return " | ".join(parts)


class UsageError(SimulationException):
    """Raised for invalid user requests such as unknown preset names."""

    def __init__(self, message: str, valid_choices: Optional[Sequence[str]] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.valid_choices = list(valid_choices) if valid_choices is not None else []

    def __str__(self) -> str:
        if self.valid_choices:
            return f"{self.message} (valid: {', '.join(self.valid_choices)})"
        return super().__str__()


class OutputError(SimulationException):
    """Raised when a result file cannot be written."""

    def __init__(self, message: str, path: Optional[str] = None, original_error: Optional[Exception] = None):
        super().__init__(message, original_error)
        self.path = path


class LoggedError:
    """Helpers that log an error before it propagates."""

    @staticmethod
    def log_and_raise(logger, exception_class, message: str, **kwargs):
        """Log an error and then raise the specified exception.

        Args:
            logger: Logger instance to use
            exception_class: Exception class to instantiate and raise
            message: Error message
            **kwargs: Additional arguments to pass to the exception constructor
        """
        logger.error(f"Raising {exception_class.__name__}: {message}")
        raise exception_class(message, **kwargs)

