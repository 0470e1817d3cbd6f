"""
Command-line entry point

    python -m milnet train --data bags.csv --out model.json
"""

import logging
import sys
from typing import Optional, Sequence, TextIO

from milnet import create_cli
from milnet.config.settings import get_settings, load_env_file
from milnet.middleware.error_handler import ErrorHandlerMiddleware


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def main(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """
    Run one CLI command.

    Args:
        argv: Arguments without the program name (sys.argv[1:] if not provided)
        stdout: Stream for results
        stderr: Stream for error messages and logs

    Returns:
        Exit status: 0 success, 1 I/O failure, 2 invalid input, 3 failed check
    """
    def run() -> int:
        load_env_file()
        settings = get_settings()
        logging.basicConfig(
            level=settings.LOG_LEVEL.upper(),
            format=LOG_FORMAT,
            stream=stderr or sys.stderr,
        )
        return create_cli(settings=settings, stdout=stdout).run(argv)

    return ErrorHandlerMiddleware(stderr).run(run)


if __name__ == "__main__":
    sys.exit(main())
