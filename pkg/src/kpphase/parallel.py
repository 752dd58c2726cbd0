"""Thread-count resolution and order-preserving parallel task execution.

Work is split per trial index; results are always reduced in task order, so
output is independent of the worker count. Worker processes are forked, which
keeps task payloads cheap to ship on Linux.
"""

from __future__ import annotations

import multiprocessing
import os
from typing import Callable, Sequence, TypeVar

THREADS_ENV_VAR = "KP_PHASE_THREADS"

_T = TypeVar("_T")
_R = TypeVar("_R")

__all__ = ["THREADS_ENV_VAR", "default_threads", "resolve_threads", "run_indexed_tasks"]


def default_threads() -> int:
    """Thread default from the environment, 1 when unset or invalid."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def resolve_threads(requested: int | None) -> int:
    if requested is None:
        return default_threads()
    if requested < 1:
        raise ValueError("threads must be at least 1")
    return requested


def run_indexed_tasks(
    fn: Callable[[_T], _R], tasks: Sequence[_T], threads: int
) -> list[_R]:
    """Map fn over tasks, preserving order; threads <= 1 stays in-process."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    chunk = max(1, len(tasks) // (threads * 4))
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=threads) as pool:
        return pool.map(fn, tasks, chunksize=chunk)
