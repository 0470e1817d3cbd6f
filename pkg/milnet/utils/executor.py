"""
Ordered task execution

Runs independent tasks (bags of a mini-batch, grid cells, outer folds)
serially or on a thread pool. Results always come back in input order, so
reductions over them are independent of completion order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def run_ordered(task: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """
    Apply task to every item, returning results in item order.

    Args:
        task: Pure function of one item
        items: Work items
        jobs: Maximum concurrent workers; 1 runs serially in the caller's thread

    Returns:
        [task(item) for item in items]
    """
    if jobs <= 1 or len(items) <= 1:
        return [task(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug(f"Running {len(items)} tasks on {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, items))
