"""Thread-pool helper and serialization formats shared by the CLI and oracles."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, Iterable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "FLEXSEARCH_THREADS"


def thread_limit() -> int:
    """Worker cap from FLEXSEARCH_THREADS (0 or unset means auto)."""
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map preserving input order; results are independent of the worker count."""
    workers = min(thread_limit(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fmt_value(value) -> str:
    """Render one CSV cell: floats at 17 significant digits (round-trip safe)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def csv_lines(header: Sequence[str], rows: Iterable[Sequence]) -> List[str]:
    """Comma-separated lines (LF appended by the writer), header first."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_value(v) for v in row))
    return lines
