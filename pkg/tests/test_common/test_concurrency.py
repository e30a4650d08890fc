import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from factormix.common.concurrency import run_ordered, spawn_seeds


@pytest.mark.parametrize('workers', [1, 2, 8])
def test_results_keep_input_order(workers: int) -> None:
    """Output order is the input order for any pool size."""
    assert run_ordered(lambda item: item * item, range(10), workers) == [
        item * item for item in range(10)
    ]


def test_tasks_run_on_several_threads() -> None:
    """More than one worker fans out."""
    barrier = threading.Barrier(2, timeout=5)

    def task(item: int) -> int:
        barrier.wait()
        return item

    assert run_ordered(task, [1, 2], workers=2) == [1, 2]


def test_empty_input() -> None:
    """Nothing to do gives nothing back."""
    assert run_ordered(str, [], workers=4) == []


@given(seed=st.integers(min_value=0, max_value=2**32))
def test_seeds_are_reproducible(seed: int) -> None:
    """Child seeds depend on the root seed only."""
    assert spawn_seeds(seed, 5) == spawn_seeds(seed, 5)


def test_seeds_are_prefix_stable() -> None:
    """Asking for more seeds keeps the first ones."""
    assert spawn_seeds(11, 3) == spawn_seeds(11, 6)[:3]
    assert len(set(spawn_seeds(11, 6))) == 6
