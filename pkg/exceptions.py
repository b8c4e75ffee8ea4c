"""
Unified exception hierarchy for the secant-defect engine.

SecantDefectError is the base exception. Every module raises a subclass of it
so the CLI can map failures to exit statuses in one place.
"""

from typing import Optional


class SecantDefectError(Exception):
    """
    Base exception class for all engine errors.

    Attributes:
        message: Human-readable error message
        details: Optional dictionary with additional error context
        original_error: Optional original exception that caused this error
    """

    def __init__(
        self,
        message: str,
        details: Optional[dict] = None,
        original_error: Optional[Exception] = None
    ) -> None:
        """
        Initialize SecantDefectError.

        Args:
            message: Human-readable error message
            details: Optional dictionary with additional error context
            original_error: Optional original exception that caused this error
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.original_error = original_error

    def __str__(self) -> str:
        """Return string representation of the error."""
        msg = self.message
        if self.details:
            detail_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            msg = f"{msg} ({detail_str})"
        return msg


class ConfigError(SecantDefectError):
    """Raised when configuration loading or validation fails."""
    pass


class FieldMismatchError(SecantDefectError):
    """Raised when values from two different exact fields are combined."""
    pass


class HeightOverflowError(SecantDefectError):
    """Raised when a rational value exceeds the configured height cap."""
    pass


class PolynomialError(SecantDefectError):
    """Raised for malformed polynomial operations."""
    pass


class CatalogError(SecantDefectError):
    """Raised when a variety constructor rejects its arguments."""
    pass


class SamplingError(SecantDefectError):
    """Raised when a random-sampling retry budget is exhausted."""
    pass


class DegenerateFrameError(SamplingError):
    """Raised when a tangent frame stays rank deficient after resampling."""
    pass


class NonDefectiveError(SecantDefectError):
    """Raised when an invariant defined only for defective varieties is requested."""
    pass


class InconsistencyError(SecantDefectError):
    """Raised when two independent computations of one quantity disagree."""
    pass


class ConsensusError(InconsistencyError):
    """Raised when the primes of a multi-prime run disagree."""
    pass


class CurveRankError(SecantDefectError):
    """Raised when a rational curve in P^4 is not a valid input."""
    pass


class IdentityCheckError(InconsistencyError):
    """Raised when a Plücker-type identity fails in strict mode."""
    pass


class ClassificationError(SecantDefectError):
    """Raised when a report cannot be classified."""
    pass


class ParseError(SecantDefectError):
    """
    Raised when an expression cannot be parsed.

    Attributes:
        line: 1-based line of the offending character
        column: 1-based column of the offending character
    """

    def __init__(
        self,
        message: str,
        line: int,
        column: int,
        details: Optional[dict] = None,
        original_error: Optional[Exception] = None
    ) -> None:
        merged = {"line": line, "column": column}
        merged.update(details or {})
        super().__init__(message, details=merged, original_error=original_error)
        self.line = line
        self.column = column


class ManifestError(SecantDefectError):
    """Raised when a variety or curve manifest is malformed."""
    pass


class ReportError(SecantDefectError):
    """Raised when report formatting or serialization fails."""
    pass
