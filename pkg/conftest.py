"""
Shared fixtures: the worked sets used throughout the suites.
"""

from pathlib import Path

import numpy as np
import pytest

from models import VPolytope, ZPolytope

FIXTURES = Path(__file__).parent / "fixtures"


def random_zpoly(rng: np.random.Generator, n: int, p: int, h: int) -> ZPolytope:
    """Random valid Z-representation with h generators over p factors."""
    exponents = []
    for _ in range(h):
        size = int(rng.integers(1, p + 1))
        exponents.append(tuple(sorted(int(k) for k in rng.choice(np.arange(1, p + 1), size, replace=False))))
    return ZPolytope(rng.normal(size=n), rng.normal(size=(n, h)), tuple(exponents), p)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def ex1() -> ZPolytope:
    return ZPolytope(
        center=[-0.5, 0.0],
        generators=[[1.5, -0.5, -0.5], [-0.5, -2.0, 0.5]],
        exponents=((1,), (2,), (1, 2)),
        num_factors=2,
    )


@pytest.fixture
def ex2() -> ZPolytope:
    return ZPolytope(
        center=[-0.5, 0.0],
        generators=[[-0.5, -0.5, 1.5], [0.5, -2.0, -0.5]],
        exponents=((1,), (2,), (1, 2)),
        num_factors=2,
    )


@pytest.fixture
def ex4() -> ZPolytope:
    return ZPolytope(
        center=[0.0, -0.5],
        generators=[[1.0, 0.0, 1.0], [-0.5, 1.5, -0.5]],
        exponents=((1,), (2,), (1, 2)),
        num_factors=2,
    )


@pytest.fixture
def hexagon() -> VPolytope:
    return VPolytope(np.array([[0, 5], [3, 6], [4, 5], [5, 1], [2, 0], [0, 2]], dtype=float))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
