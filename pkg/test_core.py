import numpy as np
import pytest

import core
from conftest import random_zpoly
from errors import DimensionMismatchError, DomainError, EnumerationCapError, InvalidSetError
from models import Interval, PolyZonotope, ZPolytope


class TestInterval:
    def test_arithmetic(self):
        a = Interval(-1.0, 2.0)
        b = Interval(0.5, 1.0)
        assert a + b == Interval(-0.5, 3.0)
        assert a - b == Interval(-2.0, 1.5)
        assert a * b == Interval(-1.0, 2.0)
        assert -a == Interval(-2.0, 1.0)
        assert a.scale(-2.0) == Interval(-4.0, 2.0)

    def test_hull_and_intersection(self):
        a = Interval(0.0, 1.0)
        assert a.hull(Interval(2.0, 3.0)) == Interval(0.0, 3.0)
        assert a.intersect(Interval(0.5, 4.0)) == Interval(0.5, 1.0)
        assert a.intersect(Interval(2.0, 3.0)) is None

    def test_negative_zero_is_normalised(self):
        assert repr(Interval(-0.0, -0.0)) == "[0.0, 0.0]"

    def test_reversed_bounds_rejected(self):
        with pytest.raises(InvalidSetError):
            Interval(1.0, 0.0)


class TestValidate:
    def test_example_set_is_valid(self, ex1):
        assert core.validate(ex1) == []

    def test_reports_every_violation(self):
        P = ZPolytope([0.0], [[1.0, 1.0, 1.0]], ((1, 1), (2, 1), (3,)), 2)
        violations = core.validate(P)
        assert len(violations) == 3
        assert "repeated" in violations[0]
        assert "not strictly increasing" in violations[1]
        assert "outside 1..2" in violations[2]

    def test_non_finite_values(self):
        P = ZPolytope([np.nan], [[1.0]], ((1,),), 1)
        assert any("finite" in v for v in core.validate(P))

    def test_length_mismatch_rejected_on_construction(self):
        with pytest.raises(InvalidSetError):
            ZPolytope([0.0], [[1.0, 2.0]], ((1,),), 1)

    def test_empty_index_list_folds_into_center(self):
        P = ZPolytope([1.0], [[2.0, 3.0]], ((), (1,)), 1)
        assert P.center.tolist() == [3.0]
        assert P.exponents == ((1,),)


class TestEvaluate:
    def test_example_vertices(self, ex1):
        assert core.evaluate(ex1, [1, 1]).tolist() == [0.0, -2.0]
        assert core.evaluate(ex1, [-1, -1]).tolist() == [-2.0, 3.0]

    def test_point_set(self):
        P = ZPolytope.point([3.0])
        assert core.evaluate(P, []).tolist() == [3.0]

    def test_wrong_alpha_length(self, ex1):
        with pytest.raises(DimensionMismatchError):
            core.evaluate(ex1, [0.0])

    def test_alpha_outside_hypercube(self, ex1):
        with pytest.raises(DomainError):
            core.evaluate(ex1, [1.5, 0.0])
        assert core.evaluate(ex1, [1.5, 0.0], allow_outside=True).shape == (2,)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite_alpha(self, ex1, bad):
        with pytest.raises(DomainError, match="finite"):
            core.evaluate(ex1, [bad, 0.0])
        with pytest.raises(DomainError, match="finite"):
            core.evaluate(ex1, [bad, 0.0], allow_outside=True)
        with pytest.raises(DomainError, match="finite"):
            core.evaluate_pz(core.lift_to_pz(ex1), [0.0, bad], allow_outside=True)

    def test_lifted_set_agrees(self, ex1, rng):
        Q = core.lift_to_pz(ex1)
        assert Q.exponents.tolist() == [[1, 0, 1], [0, 1, 1]]
        for alpha in rng.uniform(-1, 1, size=(50, 2)):
            np.testing.assert_allclose(core.evaluate_pz(Q, alpha), core.evaluate(ex1, alpha), atol=1e-12)


class TestRegularize:
    def test_merges_equal_variable_parts(self):
        P = ZPolytope([0.0, 0.0], [[1.0, 2.0, 0.0], [0.0, 1.0, 0.0]], ((1, 3), (1, 3), (2,)), 3)
        regular, mapping = core.regularize(P)
        assert regular.exponents == ((1, 2),)
        assert regular.generators[:, 0].tolist() == [3.0, 1.0]
        assert mapping == {1: 1, 3: 2}
        assert regular.num_factors == 2

    def test_size_bounds_and_same_set(self, rng):
        for _ in range(500):
            p = int(rng.integers(1, 11))
            P = random_zpoly(rng, 2, p, int(rng.integers(1, 3 * p + 2)))
            regular, mapping = core.regularize(P)
            h_max, mu_max = core.regular_size_bounds(regular.num_factors)
            assert regular.num_generators <= h_max
            assert regular.num_entries <= mu_max

            alpha = rng.uniform(-1, 1, size=p)
            new_alpha = np.zeros(regular.num_factors)
            for old, new in mapping.items():
                new_alpha[new - 1] = alpha[old - 1]
            np.testing.assert_allclose(core.evaluate(regular, new_alpha), core.evaluate(P, alpha), atol=1e-9)

    def test_opposite_generators_cancel(self):
        P = ZPolytope([1.0, 0.0], [[1.0, -1.0, 2.0], [1.0, -1.0, 0.0]], ((1, 2), (1, 2), (3,)), 3)
        regular, mapping = core.regularize(P)
        assert regular.num_generators == P.num_generators - 2
        assert regular.exponents == ((1,),)
        assert mapping == {3: 1}
        for a in (-1.0, 0.3, 1.0):
            np.testing.assert_allclose(core.evaluate(regular, [a]), core.evaluate(P, [0.7, -0.2, a]))

    def test_regular_input_is_unchanged(self, ex1, ex4):
        for P in (ex1, ex4):
            regular, mapping = core.regularize(P)
            assert regular.equals(P)
            assert mapping == {1: 1, 2: 2}

    def test_regular_size_bounds(self):
        assert core.regular_size_bounds(0) == (0, 0)
        assert core.regular_size_bounds(3) == (7, 12)


class TestEnumeration:
    def test_factor_one_is_least_significant(self, ex1):
        points = core.enumerate_vertex_points(ex1)
        assert points[0].tolist() == [-2.0, 3.0]
        np.testing.assert_allclose(points[1], core.evaluate(ex1, [1, -1]))
        assert points.shape == (4, 2)

    def test_interval_hull_of_range_example(self, ex4):
        box = core.interval_hull(ex4)
        assert box[0].lo == pytest.approx(-2.0, abs=1e-12)
        assert box[0].hi == pytest.approx(2.0, abs=1e-12)
        assert box[1].lo == pytest.approx(-2.0, abs=1e-12)
        assert box[1].hi == pytest.approx(2.0, abs=1e-12)

    def test_cap(self):
        P = ZPolytope.zonotope([0.0], np.ones((1, 21)))
        with pytest.raises(EnumerationCapError):
            core.interval_hull(P)
        with pytest.raises(EnumerationCapError):
            core.enumerate_vertex_points(P)

    def test_point_skips_the_cap(self):
        P = ZPolytope([1.0, -2.0], np.zeros((2, 0)), (), 25)
        assert core.interval_hull(P) == (Interval.point(1.0), Interval.point(-2.0))

    def test_thread_count_does_not_change_results(self, rng, monkeypatch):
        P = random_zpoly(rng, 3, 16, 20)
        monkeypatch.setenv(core.THREADS_ENV, "1")
        single = core.enumerate_vertex_points(P)
        hull_single = core.interval_hull(P)
        monkeypatch.setenv(core.THREADS_ENV, "4")
        assert np.array_equal(single, core.enumerate_vertex_points(P))
        assert hull_single == core.interval_hull(P)

    def test_thread_count_env(self, monkeypatch):
        monkeypatch.setenv(core.THREADS_ENV, "3")
        assert core.thread_count() == 3
        monkeypatch.setenv(core.THREADS_ENV, "0")
        assert core.thread_count() >= 1


def test_size_stats(ex1):
    stats = core.size_stats(ex1)
    assert (stats.p, stats.h, stats.mu, stats.n_z) == (2, 3, 4, 12)
    assert stats.as_text() == "p=2 h=3 mu=4 Nz=12"


def test_substitute_affine_reparameterises(rng):
    Q = PolyZonotope([0.5, -1.0], rng.normal(size=(2, 4)), [[1, 0, 2, 1], [0, 1, 1, 3]])
    mids, rads = np.array([0.5, -0.25]), np.array([0.5, 0.75])
    sub = core.substitute_affine(Q, mids, rads)
    for beta in rng.uniform(-1, 1, size=(20, 2)):
        np.testing.assert_allclose(
            core.evaluate_pz(sub, beta), core.evaluate_pz(Q, mids + rads * beta), atol=1e-12
        )


def test_polyzonotope_merges_in_first_occurrence_order():
    Q = PolyZonotope([0.0], [[1.0, 2.0, 3.0, 4.0]], [[2, 1, 2, 0]])
    assert Q.exponents.tolist() == [[2, 1]]
    assert Q.generators.tolist() == [[4.0, 2.0]]
    assert Q.center.tolist() == [4.0]
