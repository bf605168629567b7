from __future__ import annotations

import random

import pytest

from dilatesums import DilationPair

# Every valid pair with p + q <= 8; the workhorse parameter grid.
PAIRS8 = [
    DilationPair(1, 2),
    DilationPair(1, 3),
    DilationPair(1, 4),
    DilationPair(2, 3),
    DilationPair(1, 5),
    DilationPair(1, 6),
    DilationPair(2, 5),
    DilationPair(3, 4),
    DilationPair(1, 7),
    DilationPair(3, 5),
]


def brute_dilated(values, p, q):
    """Reference |p*A + q*A| computation: plain Python, no package internals."""
    return sorted({p * a + q * b for a in values for b in values})


def random_set(rng: random.Random, n: int, lo: int, hi: int) -> list[int]:
    return rng.sample(range(lo, hi + 1), n)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xD11A7E)
