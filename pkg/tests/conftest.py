import itertools
from fractions import Fraction

import numpy as np
import pytest

from asymtsp import Instance


def enumerate_optimum(inst: Instance) -> int:
    """Scaled optimum by plain permutation enumeration (no numpy tricks)."""
    n = inst.n
    C = inst.cost.tolist()
    if n == 1:
        return 0
    best = None
    for rest in itertools.permutations(range(1, n)):
        p = (0,) + rest
        c = sum(C[p[i]][p[(i + 1) % n]] for i in range(n))
        if best is None or c < best:
            best = c
    return best


@pytest.fixture
def triangle_violation():
    return Instance.from_matrix([[0, 1, 10], [1, 0, 1], [10, 1, 0]], name="tri")


STRENGTHS = (0, Fraction(1, 5), Fraction(1, 2))


def random_nonmetric(seed: int, n: int) -> Instance:
    rng = np.random.default_rng(seed)
    C = rng.integers(0, 30, size=(n, n))
    np.fill_diagonal(C, 0)
    return Instance(C, name=f"nm{seed}")
