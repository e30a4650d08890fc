"""Ordered fan-out of independent tasks over a thread pool."""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

_Item = TypeVar('_Item')
_Result = TypeVar('_Result')


def run_ordered(
    task: Callable[[_Item], _Result],
    items: Iterable[_Item],
    workers: int = 1,
) -> list[_Result]:
    """Apply ``task`` to every item and return results in input order.

    Results never depend on ``workers``: tasks share no state and
    the output order is the input order.

    Args:
        task: Callable run once per item.
        items: Task inputs.
        workers: Upper bound on concurrent threads.

    Returns:
        List of task results, aligned with ``items``.
    """
    materialized = list(items)
    if workers <= 1 or len(materialized) <= 1:
        return [task(item) for item in materialized]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, materialized))


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Derive ``count`` independent integer seeds from one root seed.

    Args:
        seed: Root seed.
        count: Number of child seeds.

    Returns:
        Child seeds, one per task index.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]
