"""
Unit tests for CLI middleware

Exit status mapping, error reporting and run logging.
"""

import io
import logging

import pytest

from milnet.domain.errors import DatasetParseError, SingleClassError
from milnet.dto.base import ValidationError
from milnet.middleware.error_handler import (
    EXIT_CHECK_FAILED,
    EXIT_INVALID,
    EXIT_IO_ERROR,
    EXIT_OK,
    ErrorHandlerMiddleware,
    exit_status_for,
)
from milnet.middleware.run_logger import get_run_id, with_run_logging


@pytest.mark.unit
class TestExitStatusFor:
    """Tests for exit_status_for."""

    @pytest.mark.parametrize("error,status", [
        (FileNotFoundError("data.csv"), EXIT_IO_ERROR),
        (PermissionError("out.json"), EXIT_IO_ERROR),
        (ValidationError("--batch must be positive"), EXIT_INVALID),
        (DatasetParseError("bad label", row=3), EXIT_INVALID),
        (SingleClassError("one class"), EXIT_INVALID),
        (ValueError("bad"), EXIT_INVALID),
        (RuntimeError("boom"), EXIT_IO_ERROR),
    ])
    def test_mapping(self, error, status):
        assert exit_status_for(error) == status


@pytest.mark.unit
class TestErrorHandlerMiddleware:
    """Tests for ErrorHandlerMiddleware."""

    @pytest.fixture
    def stderr(self):
        return io.StringIO()

    def test_passes_status_through(self, stderr):
        assert ErrorHandlerMiddleware(stderr).run(lambda: EXIT_CHECK_FAILED) == EXIT_CHECK_FAILED
        assert stderr.getvalue() == ""

    def test_reports_one_line(self, stderr):
        def command():
            raise FileNotFoundError("no such file: data.csv")

        status = ErrorHandlerMiddleware(stderr).run(command)

        assert status == EXIT_IO_ERROR
        assert stderr.getvalue() == "milnet: error: no such file: data.csv\n"

    def test_invalid_input(self, stderr):
        def command():
            raise ValidationError("--folds must be at least 2")

        assert ErrorHandlerMiddleware(stderr).run(command) == EXIT_INVALID
        assert "--folds" in stderr.getvalue()

    def test_unexpected_error_is_logged_with_traceback(self, stderr, caplog):
        def command():
            raise RuntimeError("boom")

        with caplog.at_level(logging.ERROR, logger="milnet.middleware.error_handler"):
            status = ErrorHandlerMiddleware(stderr).run(command)

        assert status == EXIT_IO_ERROR
        assert caplog.records[-1].exc_info is not None
        assert "Traceback" not in stderr.getvalue()

    @pytest.mark.parametrize("code,status", [(None, EXIT_OK), (0, EXIT_OK), (2, EXIT_INVALID)])
    def test_system_exit(self, stderr, code, status):
        def command():
            raise SystemExit(code)

        assert ErrorHandlerMiddleware(stderr).run(command) == status


@pytest.mark.unit
class TestRunLogger:
    """Tests for with_run_logging."""

    def test_assigns_run_id_for_the_call(self):
        seen = []

        @with_run_logging
        def train(args):
            seen.append(get_run_id())
            return 0

        assert train(None) == 0
        assert seen[0] != "unknown"
        assert get_run_id() == "unknown"

    def test_logs_start_and_finish(self, caplog):
        @with_run_logging
        def predict(args):
            return 0

        with caplog.at_level(logging.INFO, logger="milnet.middleware.run_logger"):
            predict(None)

        messages = [r.getMessage() for r in caplog.records]
        assert messages[0] == "Starting predict"
        assert messages[-1].startswith("Finished predict -> 0")
        assert caplog.records[-1].command == "predict"

    def test_reraises_and_resets(self, caplog):
        @with_run_logging
        def failing(args):
            raise ValueError("bad input")

        with caplog.at_level(logging.DEBUG, logger="milnet.middleware.run_logger"):
            with pytest.raises(ValueError):
                failing(None)

        assert get_run_id() == "unknown"
        assert caplog.records[-1].exc_info is not None
