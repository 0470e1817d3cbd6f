"""
Error handling middleware

Turns exceptions raised by a command into exit statuses and one-line
messages on stderr. No traceback escapes to the user; unexpected errors
are logged with their traceback.
"""

import logging
import sys
from typing import Callable, Optional, TextIO

from milnet.domain.errors import MilError
from milnet.dto.base import ValidationError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3


def exit_status_for(error: BaseException) -> int:
    """
    Exit status of an exception.

    Examples:
        >>> exit_status_for(FileNotFoundError("data.csv"))
        1
        >>> exit_status_for(ValidationError("--batch must be positive"))
        2
    """
    if isinstance(error, (ValidationError, MilError)):
        return EXIT_INVALID
    if isinstance(error, OSError):
        return EXIT_IO_ERROR
    if isinstance(error, ValueError):
        return EXIT_INVALID
    return EXIT_IO_ERROR


class ErrorHandlerMiddleware:
    """
    Error handling middleware for CLI commands.

    Catches all exceptions and returns exit statuses:
    0 success, 1 I/O or unexpected failure, 2 invalid input, 3 failed check.
    """

    def __init__(self, stderr: Optional[TextIO] = None):
        """
        Initialize error handler middleware.

        Args:
            stderr: Stream for user-facing error messages (sys.stderr if not provided)
        """
        self._stderr = stderr

    @property
    def stderr(self) -> TextIO:
        return self._stderr or sys.stderr

    def run(self, command: Callable[[], int]) -> int:
        """
        Run a command and map any exception to an exit status.

        Args:
            command: Callable returning an exit status

        Returns:
            The command's status, or the status of the exception it raised
        """
        try:
            return command()
        except SystemExit as exit_request:
            code = exit_request.code
            return code if isinstance(code, int) else (EXIT_OK if code is None else EXIT_INVALID)
        except KeyboardInterrupt:
            self._report("interrupted")
            return EXIT_IO_ERROR
        except Exception as error:
            status = exit_status_for(error)
            if status == EXIT_INVALID:
                logger.warning(
                    f"Invalid input: {error}",
                    extra={'error_type': type(error).__name__}
                )
            elif isinstance(error, OSError):
                logger.error(
                    f"I/O error: {error}",
                    extra={'error_type': type(error).__name__}
                )
            else:
                logger.error(
                    f"Unhandled exception: {error}",
                    extra={'error_type': type(error).__name__},
                    exc_info=True
                )
            self._report(str(error) or type(error).__name__)
            return status

    def _report(self, message: str) -> None:
        print(f"milnet: error: {message}", file=self.stderr)
