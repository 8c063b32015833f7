"""
Unified error handling utilities for wardChain.

The CLI boundary turns any exception raised by a subcommand into a
logged diagnostic and an exit code, the way a web service would turn it
into a status code.
"""

import functools
import json
import logging
import sys
import traceback
from collections.abc import Callable
from typing import Any, ParamSpec, TextIO, TypeVar

from .exceptions import (
    BaseWardChainError,
    ConfigurationError,
    ErrorSeverity,
    OutputError,
    SeedPlanError,
    convert_exception,
)

logger = logging.getLogger(__name__)

P = ParamSpec("P")
R = TypeVar("R")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_SEED_PLAN = 3
EXIT_IO = 4


def exit_code_for(exc: BaseWardChainError) -> int:
    """Map an exception to the CLI exit-code contract."""
    if isinstance(exc, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(exc, SeedPlanError):
        return EXIT_SEED_PLAN
    if isinstance(exc, OutputError):
        return EXIT_IO
    return EXIT_FAILURE


def log_level_for(severity: ErrorSeverity) -> int:
    """Map error severity to logging level."""
    severity_mapping = {
        ErrorSeverity.LOW: logging.INFO,
        ErrorSeverity.MEDIUM: logging.WARNING,
        ErrorSeverity.HIGH: logging.ERROR,
        ErrorSeverity.CRITICAL: logging.CRITICAL,
    }
    return severity_mapping.get(severity, logging.ERROR)


class CliErrorBoundary:
    """
    Outermost error handler of the command-line front door.

    Wraps a subcommand, logs failures with a severity-mapped level,
    writes a JSON diagnostic to stderr and returns the exit code.
    """

    def __init__(self, stream: TextIO | None = None, include_traceback: bool = False):
        self.stream = stream
        self.include_traceback = include_traceback

    def run(self, command: Callable[[], int | None], command_name: str = "command") -> int:
        """Execute command and return its exit code."""
        try:
            result = command()
            return EXIT_OK if result is None else result
        except BaseWardChainError as exc:
            return self._report(exc, command_name)
        except KeyboardInterrupt:
            logger.warning(
                f"{command_name} interrupted",
                extra={"event_type": "command_interrupted", "command": command_name},
            )
            return 130
        except Exception as exc:
            converted = convert_exception(
                exc,
                default_message="An unexpected error occurred",
                severity=ErrorSeverity.HIGH,
                details={"command": command_name},
            )
            logger.critical(
                f"Unhandled exception [{converted.error_code}]: {converted.message}",
                extra={
                    "event_type": "unhandled_exception",
                    "error_code": converted.error_code,
                    "command": command_name,
                    "traceback": traceback.format_exc(),
                },
            )
            return self._report(converted, command_name)

    def _report(self, exc: BaseWardChainError, command_name: str) -> int:
        exit_code = exit_code_for(exc)
        logger.log(
            log_level_for(exc.severity),
            f"{command_name} failed [{exc.error_code}]: {exc.message}",
            extra={
                "event_type": "command_failed",
                "error_code": exc.error_code,
                "category": exc.category.value,
                "severity": exc.severity.value,
                "exit_code": exit_code,
                "details": exc.details,
            },
        )

        diagnostic = exc.to_dict()
        diagnostic.update({"status": "error", "command": command_name, "exit_code": exit_code})
        if self.include_traceback:
            diagnostic["traceback"] = traceback.format_exc().split("\n")

        stream = self.stream or sys.stderr
        stream.write(json.dumps(diagnostic, default=str) + "\n")
        stream.flush()
        return exit_code


class ErrorHandler:
    """
    Decorators for consistent error handling inside library code.
    """

    @staticmethod
    def handle_errors(
        default_return: Any = None,
        log_errors: bool = True,
        convert_exceptions: bool = True,
        **convert_kwargs: Any,
    ) -> Callable[[Callable[P, R]], Callable[P, R]]:
        """
        Decorator to handle errors in functions.

        Args:
            default_return: Value to return on error when not converting
            log_errors: Whether to log errors
            convert_exceptions: Whether to convert exceptions to our format
            **convert_kwargs: Extra arguments for the converted exception
        """
        def decorator(func: Callable[P, R]) -> Callable[P, R]:
            @functools.wraps(func)
            def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
                try:
                    return func(*args, **kwargs)
                except BaseWardChainError:
                    raise
                except Exception as exc:
                    if log_errors:
                        logger.error(f"Error in {func.__name__}: {exc}", exc_info=True)

                    if convert_exceptions:
                        raise convert_exception(exc, **dict(convert_kwargs)) from exc
                    if default_return is not None:
                        return default_return  # type: ignore[no-any-return]
                    raise
            return wrapper
        return decorator
