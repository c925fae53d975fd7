"""Process pool for independent sweep points."""

from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from degenwave.core.config import settings
from degenwave.core.logging import logger

T = TypeVar("T")
R = TypeVar("R")


def run_parallel(func: Callable[[T], R], items: Iterable[T], jobs: int | None = None) -> list[R]:
    """Map func over items, in order. func must be picklable when jobs > 1."""
    items = list(items)
    jobs = jobs or settings.DEGENWAVE_JOBS
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    workers = min(jobs, len(items))
    logger.debug(f"Dispatching {len(items)} tasks to {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
