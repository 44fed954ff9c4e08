import random

import pytest

from purefields.algebra import is_squarefree
from purefields.tables import get_case


def squarefree_in_case(case_id: str, count: int, lo: int = -400, hi: int = 400, seed: int = 0) -> list[int]:
    """A reproducible selection of admissible m in the classes of one case."""
    p = get_case(case_id)
    pool = [m for m in range(lo, hi + 1) if m not in (0, 1, -1) and p.covers(m) and is_squarefree(m)]
    random.Random(seed).shuffle(pool)
    return pool[:count]


@pytest.fixture
def rng():
    return random.Random(12345)
