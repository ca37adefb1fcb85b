"""Shifted Waring Lab: Ordered Process-Pool Map.

Every parallel stage (search subtrees, verification over m, gap-scan grid points, phase
cells) goes through ``ordered_map``: results always come back in submission order, so the
merged output does not depend on the number of workers.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any, TypeVar

import structlog

logger = structlog.get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    *,
    workers: int = 1,
    initializer: Callable[..., None] | None = None,
    initargs: Sequence[Any] = (),
) -> list[R]:
    """Apply ``fn`` to every item, serially or in a process pool, preserving order.

    ``fn`` and the items must be picklable when ``workers > 1``.
    """
    work = list(items)
    if workers <= 1 or len(work) <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(item) for item in work]

    chunksize = max(1, len(work) // (workers * 4))
    logger.debug("pool.start", workers=workers, tasks=len(work), chunksize=chunksize)
    with ProcessPoolExecutor(
        max_workers=workers,
        initializer=initializer,
        initargs=tuple(initargs),
    ) as pool:
        return list(pool.map(fn, work, chunksize=chunksize))
