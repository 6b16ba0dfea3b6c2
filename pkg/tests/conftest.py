import numpy as np
import pytest

from fairkcenter import FairnessSpec, Point


def pt(pid, coords, group=1):
    if isinstance(coords, (int, float)):
        coords = (coords,)
    return Point(pid, tuple(coords), group)


def stream(spec_rows):
    """Points from (coordinate(s), group) rows, ids in row order."""
    return [pt(i, c, g) for i, (c, g) in enumerate(spec_rows)]


def random_two_group_instance(rng: np.random.Generator, max_n: int = 14, max_k: int = 5):
    """Small random instance: integer-grid coordinates (so exact ties and
    duplicates actually occur), two groups, caps of at least 1 each with the
    total budget bounded by the exhaustive-search guard."""
    n = int(rng.integers(2, max_n + 1))
    dim = int(rng.integers(1, 3))
    cap1 = int(rng.integers(1, max_k - 1))
    cap2 = int(rng.integers(1, max_k - cap1 + 1))
    points = [
        Point(i, tuple(float(c) for c in rng.integers(0, 21, size=dim)), int(rng.integers(1, 3)))
        for i in range(n)
    ]
    return points, FairnessSpec((cap1, cap2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
