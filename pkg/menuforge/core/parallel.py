"""
Parallel map for independent workloads

Grid-point LPs, fingerprint LPs and sampled u_O evaluations are independent,
so they are farmed out to a process pool when more than one job is requested.
"""

import logging
from multiprocessing import get_context
from typing import Callable, Iterable, List, Optional, TypeVar

from menuforge.core.config import settings


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_jobs(jobs: Optional[int] = None) -> int:
    """Explicit value wins, otherwise MENUFORGE_JOBS"""
    value = settings.JOBS if jobs is None else jobs
    return max(1, int(value))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: Optional[int] = None) -> List[R]:
    """
    Order-preserving map over items

    fn must be a module-level callable so the spawn context can pickle it.
    """
    items = list(items)
    workers = min(resolve_jobs(jobs), len(items))
    if workers <= 1:
        return [fn(item) for item in items]

    logger.debug(f"Dispatching {len(items)} tasks to {workers} workers")
    with get_context("spawn").Pool(processes=workers) as pool:
        return pool.map(fn, items)
