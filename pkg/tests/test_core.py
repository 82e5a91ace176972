import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.firefly.core import Bounds, KnownOptimum, Objective, RandomSource, Sense, as_vector, clamp, distance, make_objective
from src.firefly.errors import ConfigurationError, DimensionError

coordinate = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
point3 = st.lists(coordinate, min_size=3, max_size=3)


class TestDistance:
    @given(point3, point3)
    def test_symmetric_and_non_negative(self, a, b):
        assert distance(a, b) == distance(b, a)
        assert distance(a, b) >= 0.0

    @given(point3)
    def test_zero_on_identical_points(self, a):
        assert distance(a, a) == 0.0

    @given(point3, point3, point3)
    def test_triangle_inequality(self, a, b, c):
        assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9 * (1.0 + distance(a, c))

    def test_three_four_five(self):
        assert distance([0.0, 0.0], [3.0, 4.0]) == 5.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            distance([0.0, 0.0], [1.0, 2.0, 3.0])

    def test_lengths_rescale_each_axis(self):
        assert distance([0.0, 0.0], [3.0, 40.0], lengths=[1.0, 10.0]) == 5.0

    def test_lengths_must_match_dimension(self):
        with pytest.raises(DimensionError):
            distance([0.0, 0.0], [1.0, 1.0], lengths=[1.0])


class TestBounds:
    def test_cube(self):
        bounds = Bounds.cube(-1.0, 2.0, 3)
        assert bounds.dimension == 3
        np.testing.assert_array_equal(bounds.span, [3.0, 3.0, 3.0])

    @pytest.mark.parametrize("lower, upper", [([0.0, 1.0], [1.0, 1.0]), ([2.0], [1.0]), ([0.0], [math.inf])])
    def test_invalid_bounds(self, lower, upper):
        with pytest.raises(ConfigurationError):
            Bounds(np.array(lower), np.array(upper))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            Bounds(np.zeros(2), np.ones(3))

    def test_caller_arrays_stay_writeable(self):
        lower = np.zeros(2)
        Bounds(lower, np.ones(2))
        lower[0] = -1.0

    def test_contains_with_tolerance(self):
        bounds = Bounds.cube(0.0, 1.0, 2)
        assert bounds.contains([0.5, 1.0])
        assert not bounds.contains([0.5, 1.01])
        assert bounds.contains([0.5, 1.01], tol=0.02)

    def test_sample_inside(self):
        bounds = Bounds(np.array([0.0, -10.0]), np.array([1.0, 10.0]))
        points = bounds.sample(RandomSource(3), 200)
        assert points.shape == (200, 2)
        assert all(bounds.contains(p) for p in points)


class TestClamp:
    @given(point3)
    def test_idempotent_and_inside(self, x):
        bounds = Bounds.cube(-2.0, 3.0, 3)
        once = clamp(x, bounds)
        assert bounds.contains(once)
        np.testing.assert_array_equal(clamp(once, bounds), once)

    def test_inside_point_untouched(self):
        bounds = Bounds.cube(-1.0, 1.0, 2)
        np.testing.assert_array_equal(clamp([0.25, -0.5], bounds), [0.25, -0.5])


class TestRandomSource:
    def test_same_seed_same_stream(self):
        np.testing.assert_array_equal(RandomSource(42).uniform(10), RandomSource(42).uniform(10))

    def test_children_do_not_depend_on_creation_order(self):
        parent = RandomSource(5)
        first = parent.child(3).gaussian(4)
        parent.child(0).gaussian(100)
        again = RandomSource(5).child(3).gaussian(4)
        np.testing.assert_array_equal(first, again)

    def test_children_differ(self):
        parent = RandomSource(5)
        assert parent.child(0).derive_seed() != parent.child(1).derive_seed()
        assert not np.array_equal(parent.child(0).uniform(5), parent.child(1).uniform(5))

    def test_derive_seed_is_stable(self):
        assert RandomSource(9).child(2).derive_seed() == RandomSource(9).child(2).derive_seed()
        assert 0 <= RandomSource(9).derive_seed() < 2**64

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_seed_range(self, seed):
        with pytest.raises(ConfigurationError):
            RandomSource(seed)

    def test_uniform_range(self):
        draws = RandomSource(1).uniform(1000)
        assert draws.min() >= 0.0 and draws.max() < 1.0


def test_sense_is_strict():
    assert Sense.MINIMIZE.better(1.0, 2.0)
    assert not Sense.MINIMIZE.better(2.0, 2.0)
    assert Sense.MAXIMIZE.better(3.0, 2.0)
    assert not Sense.MAXIMIZE.better(2.0, 2.0)


def test_as_vector_checks_dimension():
    assert as_vector(3.0).shape == (1,)
    with pytest.raises(DimensionError):
        as_vector([1.0, 2.0], 3)
    with pytest.raises(DimensionError):
        as_vector([[1.0, 2.0]])


def test_objective_call_checks_dimension():
    objective = make_objective(lambda x: float(x.sum()), [0.0, 0.0], [1.0, 1.0])
    assert objective([0.25, 0.5]) == 0.75
    with pytest.raises(DimensionError):
        objective([0.25])


def test_known_optimum_nearest_distance():
    known = KnownOptimum(positions=((1.0, 0.0), (-1.0, 0.0)), value=0.0, kind=Sense.MINIMIZE, multiplicity=2)
    assert known.nearest_distance([-1.0, 1.0]) == pytest.approx(1.0)


def test_objective_default_sense():
    objective = Objective(func=lambda x: 0.0, bounds=Bounds.cube(0.0, 1.0, 1))
    assert objective.sense is Sense.MINIMIZE
    assert objective.dimension == 1
