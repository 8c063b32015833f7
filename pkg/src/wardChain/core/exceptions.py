"""
Unified exception classes for wardChain.

This module provides standardized exceptions with structured error
information so the CLI can log, report and map every failure to an
exit code in one place.
"""

from datetime import UTC, datetime
from enum import Enum
from typing import Any


class ErrorCategory(str, Enum):
    """Categories for error classification."""
    GRAPH = "graph"
    PLAN = "plan"
    CONTRACT = "contract"
    CHAIN = "chain"
    ELECTION = "election"
    STATISTICS = "statistics"
    INGEST = "ingest"
    CONFIGURATION = "configuration"
    OUTPUT = "output"
    VALIDATION = "validation"


class ErrorSeverity(str, Enum):
    """Error severity levels."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class BaseWardChainError(Exception):
    """
    Base exception class for all wardChain errors.

    Carries a category, severity, stable error code, free-form details
    and an optional recovery suggestion for the diagnostic printed by
    the CLI.
    """

    def __init__(
        self,
        message: str,
        category: ErrorCategory,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        error_code: str | None = None,
        details: dict[str, Any] | None = None,
        recovery_suggestion: str | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.category = category
        self.severity = severity
        self.error_code = error_code or self._generate_error_code()
        self.details = details or {}
        self.recovery_suggestion = recovery_suggestion
        self.timestamp = datetime.now(UTC)

    def _generate_error_code(self) -> str:
        """Generate an error code from category and class name."""
        class_name = self.__class__.__name__
        category_prefix = self.category.value.upper()[:3]
        return f"{category_prefix}_{class_name.upper()}"

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to a dictionary for diagnostics."""
        return {
            "error": self.message,
            "error_code": self.error_code,
            "category": self.category.value,
            "severity": self.severity.value,
            "timestamp": self.timestamp.isoformat(),
            "details": self.details,
            "recovery_suggestion": self.recovery_suggestion,
        }

    def __str__(self) -> str:
        return f"[{self.error_code}] {self.message}"


class GraphValidationError(BaseWardChainError):
    """Raised when node/edge tables do not describe a valid dual graph."""

    def __init__(
        self,
        message: str,
        ward: int | None = None,
        district: int | None = None,
        **kwargs: Any,
    ):
        kwargs.setdefault("category", ErrorCategory.GRAPH)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        details = kwargs.setdefault("details", {})
        if ward is not None:
            details["ward"] = ward
        if district is not None:
            details["district"] = district
        super().__init__(message, **kwargs)


class DisconnectedDistrictError(GraphValidationError):
    """An initial district of the tables is not a connected set of wards."""


class PlanError(BaseWardChainError):
    """Errors building or mutating a districting plan."""

    def __init__(
        self,
        message: str,
        ward: int | None = None,
        district: int | None = None,
        **kwargs: Any,
    ):
        kwargs.setdefault("category", ErrorCategory.PLAN)
        details = kwargs.setdefault("details", {})
        if ward is not None:
            details["ward"] = ward
        if district is not None:
            details["district"] = district
        super().__init__(message, **kwargs)


class ContractViolationError(BaseWardChainError):
    """A caller broke an API contract (stale flip delta, ε out of range, ...)."""

    def __init__(self, message: str, contract: str | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.CONTRACT)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        if contract:
            kwargs.setdefault("details", {})["contract"] = contract
        super().__init__(message, **kwargs)


class SeedPlanError(BaseWardChainError):
    """The seed plan violates the validity properties it is tested under."""

    def __init__(self, message: str, violations: list[str] | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.CHAIN)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        kwargs.setdefault(
            "recovery_suggestion",
            "Loosen pop_tolerance_wards or compactness_budget, or check the seed assignment",
        )
        if violations:
            kwargs.setdefault("details", {})["violations"] = violations
        super().__init__(message, **kwargs)


class ElectionError(BaseWardChainError):
    """A district cannot be scored (for example it has no votes)."""

    def __init__(self, message: str, district: int | str | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.ELECTION)
        if district is not None:
            kwargs.setdefault("details", {})["district"] = district
        super().__init__(message, **kwargs)


class NumericalFaultError(BaseWardChainError):
    """A label or statistic became non-finite."""

    def __init__(self, message: str, value: float | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.STATISTICS)
        kwargs.setdefault("severity", ErrorSeverity.CRITICAL)
        if value is not None:
            kwargs.setdefault("details", {})["value"] = repr(value)
        super().__init__(message, **kwargs)


class EnumerationLimitError(BaseWardChainError):
    """Exhaustive enumeration exceeded its configured guard."""

    def __init__(self, message: str, limit: int | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.VALIDATION)
        kwargs.setdefault(
            "recovery_suggestion",
            "Use a smaller instance or raise WARDCHAIN_ENUMERATION_LIMIT",
        )
        if limit is not None:
            kwargs.setdefault("details", {})["limit"] = limit
        super().__init__(message, **kwargs)


class IngestError(BaseWardChainError):
    """Errors in the precinct preprocessing pipeline."""

    def __init__(
        self,
        message: str,
        precincts: list[str] | None = None,
        step: str | None = None,
        **kwargs: Any,
    ):
        kwargs.setdefault("category", ErrorCategory.INGEST)
        details = kwargs.setdefault("details", {})
        if precincts:
            details["precincts"] = precincts
        if step:
            details["step"] = step
        super().__init__(message, **kwargs)


class ConservationError(IngestError):
    """District-level data changed across the preprocessing pipeline."""

    def __init__(self, message: str, **kwargs: Any):
        kwargs.setdefault("severity", ErrorSeverity.CRITICAL)
        super().__init__(message, **kwargs)


class ConfigurationError(BaseWardChainError):
    """Errors related to run configuration and settings."""

    def __init__(
        self,
        message: str,
        config_key: str | None = None,
        config_value: Any | None = None,
        **kwargs: Any,
    ):
        kwargs.setdefault("category", ErrorCategory.CONFIGURATION)
        details = kwargs.setdefault("details", {})
        if config_key:
            details["config_key"] = config_key
        if config_value is not None:
            details["config_value"] = str(config_value)
        super().__init__(message, **kwargs)


class OutputError(BaseWardChainError):
    """Errors reading or writing artifacts."""

    def __init__(self, message: str, path: str | None = None, **kwargs: Any):
        kwargs.setdefault("category", ErrorCategory.OUTPUT)
        kwargs.setdefault("severity", ErrorSeverity.HIGH)
        if path:
            kwargs.setdefault("details", {})["path"] = path
        super().__init__(message, **kwargs)


class ValidationError(BaseWardChainError):
    """Errors related to data validation."""

    def __init__(
        self,
        message: str,
        field: str | None = None,
        value: Any | None = None,
        **kwargs: Any,
    ):
        kwargs.setdefault("category", ErrorCategory.VALIDATION)
        details = kwargs.setdefault("details", {})
        if field:
            details["field"] = field
        if value is not None:
            details["value"] = str(value)
        super().__init__(message, **kwargs)


# Exception mapping for converting standard exceptions
EXCEPTION_MAPPING: dict[type[BaseException], type[BaseWardChainError]] = {
    FileNotFoundError: OutputError,
    IsADirectoryError: OutputError,
    PermissionError: OutputError,
    OSError: OutputError,
    ValueError: ValidationError,
    KeyError: ValidationError,
    TypeError: ValidationError,
}


def convert_exception(
    exc: BaseException,
    default_message: str | None = None,
    **kwargs: Any,
) -> BaseWardChainError:
    """
    Convert standard exceptions to the unified exception format.

    Args:
        exc: The exception to convert
        default_message: Default message if none can be extracted
        **kwargs: Additional arguments for the exception constructor

    Returns:
        Converted BaseWardChainError
    """
    if isinstance(exc, BaseWardChainError):
        return exc

    exc_type = type(exc)
    message = default_message or str(exc) or f"Unexpected {exc_type.__name__}"

    target_exception_class: type[BaseWardChainError] = ValidationError
    for source_type in exc_type.__mro__:
        if source_type in EXCEPTION_MAPPING:
            target_exception_class = EXCEPTION_MAPPING[source_type]
            break
    else:
        kwargs.setdefault("severity", ErrorSeverity.HIGH)

    kwargs.setdefault("details", {}).update({
        "original_exception_type": exc_type.__name__,
        "original_exception_message": str(exc),
    })

    return target_exception_class(message, **kwargs)
