"""
Shared fixtures: the three line instances used across the test files.

I1: points 0, 1, 10, 11 on a line, P = L
I2: I1 colored red, blue, red, blue
I3: points 0, 1, 2, 100 on a line, P = L
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import pytest

from core.instance import Instance


def line_instance(coords, k, ids=None, **params) -> Instance:
    ids = ids or [f"p{c}" for c in coords]
    matrix = [[abs(a - b) for b in coords] for a in coords]
    return Instance.create(ids, ids, matrix, k, **params).validate()


@pytest.fixture
def i1():
    return line_instance([0, 1, 10, 11], k=2)


@pytest.fixture
def i2():
    return line_instance([0, 1, 10, 11], k=2,
                         colors={"p0": "red", "p1": "blue", "p10": "red", "p11": "blue"})


@pytest.fixture
def i3():
    return line_instance([0, 1, 2, 100], k=1)
