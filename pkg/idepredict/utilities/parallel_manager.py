"""
Parallel Execution Manager - sharded execution of independent work blocks

This module provides:
- Shard plans that split a run count into fixed-size blocks, independent of
  the number of workers
- A thread-pool executor that runs blocks concurrently and returns results in
  block order
- Execution metrics for logging
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Dict, List, Optional, Tuple, TypeVar

import psutil

T = TypeVar("T")

DEFAULT_BLOCK_SIZE = 256


def default_worker_count() -> int:
    """Number of physical cores, falling back to logical cores, at least 1."""
    count = psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True) or 1
    return max(1, int(count))


@dataclass(frozen=True)
class ShardPlan:
    """Split of ``n_items`` into consecutive blocks of ``block_size``."""
    n_items: int
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self):
        if self.n_items < 0:
            raise ValueError(f"n_items must be non-negative, got {self.n_items}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be positive, got {self.block_size}")

    @property
    def n_blocks(self) -> int:
        return -(-self.n_items // self.block_size)

    def blocks(self) -> List[Tuple[int, int, int]]:
        """Return ``(block_index, start, stop)`` for every block."""
        return [
            (index, start, min(start + self.block_size, self.n_items))
            for index, start in enumerate(range(0, self.n_items, self.block_size))
        ]


@dataclass
class ParallelExecutionMetrics:
    """Metrics for parallel execution monitoring."""
    execution_id: str
    start_time: datetime
    end_time: Optional[datetime] = None
    total_blocks: int = 0
    completed_blocks: int = 0
    worker_count: int = 0
    total_execution_time: float = 0.0
    block_durations: Dict[int, float] = field(default_factory=dict)

    @property
    def average_block_duration(self) -> float:
        if not self.block_durations:
            return 0.0
        return sum(self.block_durations.values()) / len(self.block_durations)


class ParallelShardExecutor:
    """Runs the blocks of a ``ShardPlan`` on a thread pool.

    Results are always returned in block order, so any reduction over them
    is independent of the worker count.
    """

    def __init__(self, max_workers: Optional[int] = None):
        if max_workers is not None and max_workers < 1:
            raise ValueError(f"max_workers must be positive, got {max_workers}")
        self.max_workers = max_workers or default_worker_count()
        self.logger = logging.getLogger(self.__class__.__name__)
        self._lock = threading.Lock()
        self.last_metrics: Optional[ParallelExecutionMetrics] = None

    def map_blocks(self, plan: ShardPlan,
                   work: Callable[[int, int, int], T],
                   execution_id: str = "shards") -> List[T]:
        """
        Apply ``work(block_index, start, stop)`` to every block.

        Args:
            plan: Block layout
            work: Pure function of the block coordinates
            execution_id: Label used in metrics and logs

        Returns:
            List[T]: One result per block, in block order
        """
        blocks = plan.blocks()
        workers = max(1, min(self.max_workers, len(blocks) or 1))
        metrics = ParallelExecutionMetrics(
            execution_id=execution_id,
            start_time=datetime.now(),
            total_blocks=len(blocks),
            worker_count=workers,
        )

        def timed(block: Tuple[int, int, int]) -> T:
            started = time.perf_counter()
            result = work(*block)
            with self._lock:
                metrics.block_durations[block[0]] = time.perf_counter() - started
                metrics.completed_blocks += 1
            return result

        started = time.perf_counter()
        if workers == 1:
            results = [timed(block) for block in blocks]
        else:
            with ThreadPoolExecutor(max_workers=workers,
                                    thread_name_prefix=execution_id) as pool:
                results = list(pool.map(timed, blocks))

        metrics.end_time = datetime.now()
        metrics.total_execution_time = time.perf_counter() - started
        self.last_metrics = metrics
        self.logger.debug(
            f"{execution_id}: {metrics.completed_blocks}/{metrics.total_blocks} blocks "
            f"on {workers} workers in {metrics.total_execution_time:.3f}s"
        )
        return results
