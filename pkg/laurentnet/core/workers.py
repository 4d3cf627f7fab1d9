"""
Thread pool helper honouring the global thread count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from laurentnet.core import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_thread_count = config.THREADS


def set_thread_count(threads: int) -> None:
    global _thread_count
    if threads < 1:
        raise ValueError("thread count must be positive")
    _thread_count = threads
    logger.debug(f"Worker threads set to {threads}")


def get_thread_count() -> int:
    return _thread_count


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Map ``fn`` over ``items`` preserving order"""
    items = list(items)
    workers = min(threads or get_thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
