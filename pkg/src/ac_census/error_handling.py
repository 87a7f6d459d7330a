"""
Error Handling Module

This module provides the exception hierarchy, error categorization and the
CLI error decorator for the Andrews-Curtis census toolkit.

Budget exhaustion (coset enumeration running out of cosets, a genetic search
running out of generations or time, a BFS oracle not reaching the standard
tuple) is a *result*, not an error, and never surfaces through this module.
"""

import functools
import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)


class ErrorSeverity(str, Enum):
    """Error severity levels."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(str, Enum):
    """Error categories for handling and reporting."""
    PARSE_ERROR = "parse_error"
    RANK_ERROR = "rank_error"
    MOVE_ERROR = "move_error"
    CERTIFICATE_ERROR = "certificate_error"
    PRECONDITION_ERROR = "precondition_error"
    RESOURCE_ERROR = "resource_error"
    STORAGE_ERROR = "storage_error"
    CONFIGURATION_ERROR = "configuration_error"
    UNKNOWN_ERROR = "unknown_error"


@dataclass
class ErrorContext:
    """Context information for error tracking."""
    timestamp: datetime = field(default_factory=datetime.now)
    operation: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class ACCensusError(Exception):
    """Base exception for all census toolkit errors."""

    def __init__(self, message: str, category: ErrorCategory = ErrorCategory.UNKNOWN_ERROR,
                 severity: ErrorSeverity = ErrorSeverity.MEDIUM, context: Optional[ErrorContext] = None):
        super().__init__(message)
        self.category = category
        self.severity = severity
        self.context = context or ErrorContext()
        self.timestamp = datetime.now()


class WordParseError(ACCensusError):
    """Raised when a word or presentation text cannot be parsed."""

    def __init__(self, message: str, text: Optional[str] = None, position: Optional[int] = None,
                 context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.PARSE_ERROR, ErrorSeverity.MEDIUM, context)
        self.text = text
        self.position = position


class PresentationFormatError(ACCensusError):
    """Raised when a presentation line is malformed or unbalanced."""

    def __init__(self, message: str, line: Optional[str] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.PARSE_ERROR, ErrorSeverity.MEDIUM, context)
        self.line = line


class RankMismatchError(ACCensusError):
    """Raised when two words or presentations of different rank are combined."""

    def __init__(self, left: int, right: int, context: Optional[ErrorContext] = None):
        super().__init__(f"rank mismatch: {left} != {right}", ErrorCategory.RANK_ERROR,
                         ErrorSeverity.MEDIUM, context)
        self.left = left
        self.right = right


class MoveIndexError(ACCensusError):
    """Raised when an AC-move refers to relators the presentation does not have."""

    def __init__(self, message: str, move: Optional[str] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.MOVE_ERROR, ErrorSeverity.MEDIUM, context)
        self.move = move


class CertificateFormatError(ACCensusError):
    """Raised when a certificate file cannot be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.CERTIFICATE_ERROR, ErrorSeverity.MEDIUM, context)
        self.line_number = line_number


class PreconditionError(ACCensusError):
    """Raised when an operation is called outside its documented precondition."""

    def __init__(self, message: str, operation: Optional[str] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.PRECONDITION_ERROR, ErrorSeverity.MEDIUM, context)
        self.operation = operation


class SearchLimitError(ACCensusError):
    """Raised when an exhaustive search exceeds its state cap."""

    def __init__(self, message: str, states: Optional[int] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.RESOURCE_ERROR, ErrorSeverity.HIGH, context)
        self.states = states


class StorageError(ACCensusError):
    """Raised when census record files are missing, unreadable or corrupt."""

    def __init__(self, message: str, path: Optional[str] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.STORAGE_ERROR, ErrorSeverity.HIGH, context)
        self.path = path


class ConfigurationError(ACCensusError):
    """Raised when configuration is invalid or missing."""

    def __init__(self, message: str, config_key: Optional[str] = None, context: Optional[ErrorContext] = None):
        super().__init__(message, ErrorCategory.CONFIGURATION_ERROR, ErrorSeverity.HIGH, context)
        self.config_key = config_key


class ErrorCategorizer:
    """Maps exceptions onto categories and severities."""

    @classmethod
    def categorize_error(cls, exception: Exception) -> ErrorCategory:
        """Categorize an error based on its type."""
        if isinstance(exception, ACCensusError):
            return exception.category
        if isinstance(exception, (OSError, EOFError)):
            return ErrorCategory.STORAGE_ERROR
        if isinstance(exception, MemoryError):
            return ErrorCategory.RESOURCE_ERROR
        return ErrorCategory.UNKNOWN_ERROR

    @classmethod
    def determine_severity(cls, exception: Exception) -> ErrorSeverity:
        """Determine error severity."""
        if isinstance(exception, ACCensusError):
            return exception.severity
        category = cls.categorize_error(exception)
        if category in (ErrorCategory.STORAGE_ERROR, ErrorCategory.RESOURCE_ERROR):
            return ErrorSeverity.HIGH
        return ErrorSeverity.MEDIUM


def describe_error(exception: Exception) -> str:
    """One-line technical description used in logs and on stderr."""
    category = ErrorCategorizer.categorize_error(exception)
    return f"{category.value}: {exception}"


def handle_errors(on_error: Callable[[Exception], Any]):
    """Decorator routing domain errors to ``on_error`` instead of propagating them.

    Only ``ACCensusError`` is intercepted; anything else is a bug and keeps
    its traceback.
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except ACCensusError as e:
                severity = ErrorCategorizer.determine_severity(e)
                if severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
                    logger.error(describe_error(e))
                else:
                    logger.debug(describe_error(e))
                return on_error(e)
        return wrapper
    return decorator
