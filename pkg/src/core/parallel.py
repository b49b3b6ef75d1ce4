"""
并行映射 - 结果按任务序号排序, 与调度顺序无关
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from src.config.settings import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count(n_tasks: int, threads: Optional[int] = None) -> int:
    """线程数: 显式参数优先, 其次 CLASSICML_THREADS, 默认单线程"""
    limit = threads if threads is not None else settings.threads
    if not limit:
        return 1
    return max(1, min(int(limit), n_tasks))


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """对 items 逐个调用 fn, 返回顺序与 items 一致"""
    items = list(items)
    workers = worker_count(len(items), threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("并行执行 %d 个任务, 线程数 %d", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
