import math
import random

import pytest
from hypothesis import settings

from geodesic_index.iteration import GeodesicModel
from geodesic_index.numerics import quadratic

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

SQUAREFREE = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23)


def random_turn(rng: random.Random):
    """A quadratic irrational in (0, 1)."""
    while True:
        d = rng.choice(SQUAREFREE)
        r = rng.randint(2, 40)
        q = rng.choice((1, -1)) * rng.randint(1, 9)
        # centre p so that the value lands near a random point of (0, 1)
        target = rng.random() * r
        p = round(target - q * math.sqrt(d))
        t = quadratic(p, q, d, r)
        if 0.001 < float(t) < 0.999:
            return t


def random_model(rng: random.Random, n: int | None = None, index: int | None = None) -> GeodesicModel:
    n = rng.randint(2, 6) if n is None else n
    if index is None:
        index = (n - 1) + 2 * rng.randint(0, 4)
    return GeodesicModel(n, index, tuple(random_turn(rng) for _ in range(n - 1)))


@pytest.fixture
def root_half():
    """The running example: n = 2, i = 1, turn sqrt(2)/2."""
    return GeodesicModel(2, 1, (quadratic(0, 1, 2, 2),), "c1")


@pytest.fixture
def three_sphere_pair():
    return GeodesicModel(3, 2, (quadratic(-1, 1, 2), quadratic(-1, 1, 3)), "c1")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
