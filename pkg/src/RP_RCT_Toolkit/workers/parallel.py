"""
Runs independent jobs (Monte Carlo replicates, bootstrap blocks) on a
joblib worker pool. Results come back in submission order.
"""
import logging
from typing import Any, Callable, Iterable, List, Optional, Sequence

from joblib import Parallel, delayed

from ..utils.settings import worker_count

logger = logging.getLogger(__name__)


def run_jobs(
    function: Callable[..., Any],
    items: Iterable[Any],
    n_jobs: Optional[int] = None,
    *args: Any,
) -> List[Any]:
    """
    Call function(item, *args) for every item.

    Args:
        function: Module-level callable (must be picklable)
        items: Job inputs
        n_jobs: Worker count (default: RP_RCT_WORKERS or settings)

    Returns:
        Results in the order of `items`
    """
    items = list(items)
    workers = min(worker_count(n_jobs), max(1, len(items)))
    if workers == 1:
        return [function(item, *args) for item in items]
    logger.debug("Running %d jobs on %d workers", len(items), workers)
    return Parallel(n_jobs=workers)(delayed(function)(item, *args) for item in items)


def blocks(count: int, n_blocks: int) -> List[Sequence[int]]:
    """Split range(count) into at most n_blocks contiguous ranges."""
    n_blocks = max(1, min(n_blocks, count))
    size, extra = divmod(count, n_blocks)
    out, start = [], 0
    for i in range(n_blocks):
        stop = start + size + (1 if i < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out
