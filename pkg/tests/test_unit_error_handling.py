"""
Unit Tests for Error Handling Module

This module contains unit tests for the exception hierarchy, the error
categorizer and the error-routing decorator.
"""

import logging

import pytest

from src.ac_census.error_handling import (
    ACCensusError,
    CertificateFormatError,
    ConfigurationError,
    ErrorCategorizer,
    ErrorCategory,
    ErrorContext,
    ErrorSeverity,
    MoveIndexError,
    PreconditionError,
    RankMismatchError,
    SearchLimitError,
    StorageError,
    WordParseError,
    describe_error,
    handle_errors,
)


class TestErrorEnums:
    """Test cases for error enums."""

    def test_error_severity_enum(self):
        """Test ErrorSeverity enum values."""
        assert ErrorSeverity.LOW == "low"
        assert ErrorSeverity.MEDIUM == "medium"
        assert ErrorSeverity.HIGH == "high"
        assert ErrorSeverity.CRITICAL == "critical"

    def test_error_category_enum(self):
        """Test ErrorCategory enum values."""
        assert ErrorCategory.PARSE_ERROR == "parse_error"
        assert ErrorCategory.STORAGE_ERROR == "storage_error"
        assert ErrorCategory.CONFIGURATION_ERROR == "configuration_error"


class TestErrorContext:
    """Test cases for ErrorContext."""

    def test_error_context_creation(self):
        """Test ErrorContext creation with defaults."""
        context = ErrorContext()
        assert context.timestamp is not None
        assert context.operation is None
        assert context.metadata == {}


class TestExceptions:
    """Test cases for the exception hierarchy."""

    def test_base_error(self):
        error = ACCensusError("something broke")
        assert str(error) == "something broke"
        assert error.category == ErrorCategory.UNKNOWN_ERROR
        assert error.severity == ErrorSeverity.MEDIUM

    @pytest.mark.parametrize("error,category", [
        (WordParseError("bad", text="xz", position=1), ErrorCategory.PARSE_ERROR),
        (RankMismatchError(2, 3), ErrorCategory.RANK_ERROR),
        (MoveIndexError("no relator 3", move="inv 3"), ErrorCategory.MOVE_ERROR),
        (CertificateFormatError("bad", line_number=4), ErrorCategory.CERTIFICATE_ERROR),
        (PreconditionError("rank 3", operation="is_primitive"), ErrorCategory.PRECONDITION_ERROR),
        (SearchLimitError("too many", states=10), ErrorCategory.RESOURCE_ERROR),
        (StorageError("missing", path="/tmp/x"), ErrorCategory.STORAGE_ERROR),
        (ConfigurationError("bad", config_key="shards"), ErrorCategory.CONFIGURATION_ERROR),
    ])
    def test_categories(self, error, category):
        """Test that every domain error carries its category."""
        assert isinstance(error, ACCensusError)
        assert error.category == category

    def test_rank_mismatch_message(self):
        error = RankMismatchError(2, 3)
        assert str(error) == "rank mismatch: 2 != 3"
        assert (error.left, error.right) == (2, 3)

    def test_attributes_are_kept(self):
        assert WordParseError("bad", position=5).position == 5
        assert CertificateFormatError("bad", line_number=7).line_number == 7
        assert StorageError("bad", path="p").path == "p"


class TestErrorCategorizer:
    """Test cases for ErrorCategorizer."""

    def test_domain_errors(self):
        assert ErrorCategorizer.categorize_error(StorageError("x")) == ErrorCategory.STORAGE_ERROR
        assert ErrorCategorizer.determine_severity(StorageError("x")) == ErrorSeverity.HIGH
        assert ErrorCategorizer.determine_severity(WordParseError("x")) == ErrorSeverity.MEDIUM

    def test_builtin_errors(self):
        assert ErrorCategorizer.categorize_error(FileNotFoundError("x")) == ErrorCategory.STORAGE_ERROR
        assert ErrorCategorizer.categorize_error(MemoryError()) == ErrorCategory.RESOURCE_ERROR
        assert ErrorCategorizer.categorize_error(KeyError("x")) == ErrorCategory.UNKNOWN_ERROR
        assert ErrorCategorizer.determine_severity(OSError("x")) == ErrorSeverity.HIGH
        assert ErrorCategorizer.determine_severity(KeyError("x")) == ErrorSeverity.MEDIUM

    def test_describe_error(self):
        assert describe_error(PreconditionError("rank 3")) == "precondition_error: rank 3"


class TestHandleErrors:
    """Test cases for the handle_errors decorator."""

    def test_passes_results_through(self):
        @handle_errors(lambda e: "handled")
        def ok():
            return 42

        assert ok() == 42

    def test_routes_domain_errors(self):
        seen = []

        @handle_errors(lambda e: seen.append(e) or "handled")
        def fails():
            raise MoveIndexError("no relator 3")

        assert fails() == "handled"
        assert isinstance(seen[0], MoveIndexError)

    def test_other_errors_propagate(self):
        @handle_errors(lambda e: "handled")
        def bug():
            raise KeyError("missing")

        with pytest.raises(KeyError):
            bug()

    def test_high_severity_is_logged(self, caplog):
        @handle_errors(lambda e: None)
        def fails():
            raise StorageError("disk gone")

        with caplog.at_level(logging.ERROR):
            fails()
        assert "storage_error: disk gone" in caplog.text

    def test_keeps_function_metadata(self):
        @handle_errors(lambda e: None)
        def documented():
            """Docstring."""

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "Docstring."
