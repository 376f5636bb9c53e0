import numpy as np
import pytest

import core
from conftest import random_zpoly
from errors import DimensionMismatchError
from models import ZPolytope
from setops import convex_hull, linear_map, merge_concat, minkowski_sum


def test_merge_concat_reassembles_split_generators(ex1):
    first = (ex1.generators[:, :1], ex1.exponents[:1])
    second = (ex1.generators[:, 1:], ex1.exponents[1:])
    merged = merge_concat(ex1.center, first, second, ex1.num_factors)
    assert merged.equals(ex1)


def test_linear_map_selects_a_row(ex1):
    mapped = linear_map([[1.0, 0.0]], ex1)
    assert mapped.dim == 1
    assert mapped.center.tolist() == [-0.5]
    assert mapped.generators.tolist() == [[1.5, -0.5, -0.5]]
    assert mapped.exponents == ex1.exponents


def test_linear_map_dimension_mismatch(ex1):
    with pytest.raises(DimensionMismatchError):
        linear_map(np.eye(3), ex1)


def test_linear_maps_compose(rng):
    for _ in range(20):
        P = random_zpoly(rng, 3, 3, 5)
        A, B = rng.normal(size=(2, 4)), rng.normal(size=(4, 3))
        twice = linear_map(A, linear_map(B, P))
        once = linear_map(A @ B, P)
        assert twice.exponents == once.exponents
        assert twice.equals(once, tol=1e-9)


def test_minkowski_sum_commutes_up_to_factor_order(rng):
    for _ in range(20):
        p1, p2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        P1 = random_zpoly(rng, 2, p1, int(rng.integers(1, 5)))
        P2 = random_zpoly(rng, 2, p2, int(rng.integers(1, 5)))
        forward, backward = minkowski_sum(P1, P2), minkowski_sum(P2, P1)
        a1, a2 = rng.uniform(-1, 1, p1), rng.uniform(-1, 1, p2)
        np.testing.assert_allclose(
            core.evaluate(forward, np.concatenate([a1, a2])),
            core.evaluate(backward, np.concatenate([a2, a1])),
            atol=1e-12,
        )


def test_minkowski_sum_shifts_second_factors(ex1):
    total = minkowski_sum(ex1, ex1)
    stats = core.size_stats(total)
    assert (stats.p, stats.h, stats.mu) == (4, 6, 8)
    assert total.exponents == ((1,), (2,), (1, 2), (3,), (4,), (3, 4))


def test_minkowski_sum_adds_points(ex1, ex4, rng):
    total = minkowski_sum(ex1, ex4)
    for _ in range(20):
        a1, a2 = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        np.testing.assert_allclose(
            core.evaluate(total, np.concatenate([a1, a2])),
            core.evaluate(ex1, a1) + core.evaluate(ex4, a2),
            atol=1e-12,
        )


def test_convex_hull_sizes_of_two_copies(ex1):
    stats = core.size_stats(convex_hull(ex1, ex1))
    assert (stats.p, stats.h, stats.mu) == (5, 13, 23)


def test_convex_hull_bookkeeping_random_pairs(rng):
    for _ in range(200):
        P1 = random_zpoly(rng, 2, int(rng.integers(1, 5)), int(rng.integers(1, 6)))
        P2 = random_zpoly(rng, 2, int(rng.integers(1, 5)), int(rng.integers(1, 6)))
        hull = convex_hull(P1, P2)
        assert hull.num_factors == P1.num_factors + P2.num_factors + 1
        assert hull.num_generators == 2 * P1.num_generators + 2 * P2.num_generators + 1
        assert hull.num_entries == (
            2 * P1.num_entries + 2 * P2.num_entries + P1.num_generators + P2.num_generators + 1
        )
        assert core.validate(hull) == []


def test_convex_hull_contains_both_operands(ex1, ex4, rng):
    hull = convex_hull(ex1, ex4)
    for _ in range(20):
        a1, a2 = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        np.testing.assert_allclose(
            core.evaluate(hull, np.concatenate([a1, a2, [1.0]])), core.evaluate(ex1, a1), atol=1e-12
        )
        np.testing.assert_allclose(
            core.evaluate(hull, np.concatenate([a1, a2, [-1.0]])), core.evaluate(ex4, a2), atol=1e-12
        )


def test_convex_hull_of_two_points():
    hull = convex_hull(ZPolytope.point([0.0, 0.0]), ZPolytope.point([2.0, 4.0]))
    assert hull.center.tolist() == [1.0, 2.0]
    assert hull.generators.tolist() == [[-1.0], [-2.0]]
    assert hull.exponents == ((1,),)


def test_dimension_mismatch(ex1):
    with pytest.raises(DimensionMismatchError):
        minkowski_sum(ex1, ZPolytope.point([0.0]))
    with pytest.raises(DimensionMismatchError):
        convex_hull(ex1, ZPolytope.point([0.0]))
