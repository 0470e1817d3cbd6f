"""
Run logging middleware

Structured logging around every CLI command: a run id for tracing, the
command name and its duration.
"""

import logging
import time
import uuid
from contextvars import ContextVar
from functools import wraps


logger = logging.getLogger(__name__)

_run_id: ContextVar[str] = ContextVar("milnet_run_id", default="unknown")


def get_run_id() -> str:
    """
    Get current run ID.

    Returns:
        Run ID string or 'unknown' outside a logged run
    """
    return _run_id.get()


def with_run_logging(func):
    """
    Decorator to add run logging to a command handler.

    Assigns a fresh run id, logs entry and exit with duration, and logs
    failures before re-raising them.

    Args:
        func: Handler taking parsed arguments and returning an exit status

    Returns:
        Wrapped function
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        token = _run_id.set(str(uuid.uuid4()))
        command = func.__name__
        start_time = time.time()

        logger.info(
            f"Starting {command}",
            extra={'run_id': get_run_id(), 'command': command}
        )

        try:
            status = func(*args, **kwargs)
            duration_ms = (time.time() - start_time) * 1000

            logger.info(
                f"Finished {command} -> {status} ({duration_ms:.2f}ms)",
                extra={
                    'run_id': get_run_id(),
                    'command': command,
                    'status': status,
                    'duration_ms': round(duration_ms, 2)
                }
            )

            return status

        except Exception as e:
            duration_ms = (time.time() - start_time) * 1000

            logger.debug(
                f"Error in {command}: {str(e)}",
                extra={
                    'run_id': get_run_id(),
                    'command': command,
                    'duration_ms': round(duration_ms, 2),
                    'error': str(e)
                },
                exc_info=True
            )

            raise

        finally:
            _run_id.reset(token)

    return wrapper
