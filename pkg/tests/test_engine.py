import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.firefly.core import Bounds, Objective, RandomSource, Sense
from src.firefly.engine import (
    DistanceUnits,
    FaParams,
    FireflyState,
    NoiseKind,
    attractiveness,
    brightness,
    make_params,
    move_towards,
    pso_limit_equivalence_mode,
    random_walk,
    rank,
    run,
    scales_from_bounds,
    step,
)
from src.firefly.errors import ConfigurationError, DimensionError
from src.firefly.functions import get_function


def _state(position, objective: Objective) -> FireflyState:
    position = np.asarray(position, dtype=np.float64)
    value = objective(position)
    return FireflyState(position, brightness(value, objective.sense), value)


class TestAttractiveness:
    @given(st.floats(min_value=0.0, max_value=1e6, allow_nan=False))
    def test_constant_when_gamma_is_zero(self, r):
        params = FaParams(gamma=0.0, beta0=0.7)
        assert attractiveness(r, params) == 0.7

    def test_beta0_at_zero_distance(self):
        assert attractiveness(0.0, FaParams(gamma=5.0, beta0=0.3)) == 0.3

    @given(st.floats(min_value=0.0, max_value=50.0), st.floats(min_value=0.0, max_value=50.0))
    def test_decreasing_in_distance(self, a, b):
        params = FaParams(gamma=0.5)
        near, far = sorted((a, b))
        assert attractiveness(near, params) >= attractiveness(far, params)

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            attractiveness(-1.0, FaParams())

    def test_huge_power_underflows_to_zero(self):
        params = FaParams(gamma=1.0, distance_exponent=200.0)
        assert attractiveness(200.0, params) == 0.0
        assert attractiveness(200.0, params.model_copy(update={"gamma": 0.0})) == 1.0

    def test_unit_distance(self):
        assert attractiveness(1.0, FaParams()) == pytest.approx(math.exp(-1.0))


class TestMoveTowards:
    def test_lands_exactly_on_brighter_without_noise(self):
        params = FaParams(alpha=0.0, gamma=0.0, beta0=1.0)
        moved = move_towards([1.0, -2.0], [3.5, 4.25], params, RandomSource(0))
        np.testing.assert_array_equal(moved, [3.5, 4.25])

    def test_zero_attraction_and_noise_stays_put(self):
        params = FaParams(alpha=0.0, gamma=1e9, beta0=1.0)
        moved = move_towards([1.0, 1.0], [9.0, 9.0], params, RandomSource(0))
        np.testing.assert_array_equal(moved, [1.0, 1.0])

    def test_scales_are_applied_per_dimension(self):
        params = FaParams(alpha=1.0, gamma=1e9, scales=(1.0, 0.0001))
        moved = move_towards([0.0, 0.0], [5.0, 5.0], params, RandomSource(3))
        assert abs(moved[1]) < 1e-3
        assert moved[0] != 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            move_towards([0.0], [1.0, 2.0], FaParams(), RandomSource(0))

    def test_unit_step_without_noise(self):
        moved = move_towards([0.0], [1.0], FaParams(alpha=0.0), RandomSource(0))
        assert moved[0] == pytest.approx(math.exp(-1.0))

    def test_lengths_rescale_the_distance(self):
        params = FaParams(alpha=0.0)
        moved = move_towards([0.0], [1.0], params, RandomSource(0), lengths=[20.0])
        assert moved[0] == pytest.approx(math.exp(-(1.0 / 20.0) ** 2))


class TestRandomWalk:
    def test_zero_alpha_is_identity(self):
        np.testing.assert_array_equal(random_walk([1.5, -2.0], FaParams(alpha=0.0), RandomSource(4)), [1.5, -2.0])

    def test_step_is_alpha_times_first_gaussian_draw(self):
        first = RandomSource(11).gaussian(1)[0]
        walked = random_walk([0.75], FaParams(alpha=0.2, scales=(1.0,)), RandomSource(11))
        assert walked[0] == 0.75 + 0.2 * first

    def test_scales_multiply_the_displacement(self):
        unit = random_walk([0.0], FaParams(alpha=0.2, scales=(1.0,)), RandomSource(11))
        wide = random_walk([0.0], FaParams(alpha=0.2, scales=(1e5,)), RandomSource(11))
        np.testing.assert_allclose(wide, 1e5 * unit, rtol=1e-12)


class TestStep:
    def test_dimmer_firefly_lands_on_brighter(self, sphere_objective):
        params = FaParams(population=2, alpha=0.0, gamma=0.0, beta0=1.0)
        population = rank([_state([3.0, 1.0], sphere_objective), _state([0.5, -0.5], sphere_objective)])
        after = step(population, sphere_objective, params, RandomSource(1), 0)
        for state in after:
            np.testing.assert_array_equal(state.position, [0.5, -0.5])

    def test_equal_brightness_without_noise_is_stationary(self):
        flat = Objective(func=lambda x: 1.0, bounds=Bounds.cube(-1.0, 1.0, 2))
        params = FaParams(population=3, alpha=0.0)
        positions = [[0.1, 0.2], [-0.3, 0.4], [0.9, -0.9]]
        population = [_state(p, flat) for p in positions]
        after = step(population, flat, params, RandomSource(2), 0)
        np.testing.assert_array_equal(np.array([s.position for s in after]), np.array(positions))

    def test_does_not_mutate_input(self, sphere_objective, small_params):
        population = [_state(p, sphere_objective) for p in sphere_objective.bounds.sample(RandomSource(0), 8)]
        before = [s.position.copy() for s in population]
        step(population, sphere_objective, small_params, RandomSource(5), 0)
        for state, original in zip(population, before):
            np.testing.assert_array_equal(state.position, original)

    def test_returns_ranked_population_inside_bounds(self, sphere_objective, small_params):
        population = [_state(p, sphere_objective) for p in sphere_objective.bounds.sample(RandomSource(0), 8)]
        after = step(population, sphere_objective, small_params, RandomSource(5), 0)
        intensities = [s.intensity for s in after]
        assert intensities == sorted(intensities, reverse=True)
        assert all(sphere_objective.bounds.contains(s.position) for s in after)

    def test_rejects_single_firefly(self, sphere_objective):
        with pytest.raises(ConfigurationError):
            step([_state([0.0, 0.0], sphere_objective)], sphere_objective, FaParams(), RandomSource(0), 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_evaluations_per_generation_are_bounded(self, seed):
        calls = []

        def counted(x):
            calls.append(1)
            return float(np.sum(x**2))

        objective = Objective(func=counted, bounds=Bounds.cube(-5.0, 5.0, 3))
        n = 12
        population = rank([_state(p, objective) for p in objective.bounds.sample(RandomSource(seed), n)])
        calls.clear()
        step(population, objective, FaParams(population=n, seed=seed), RandomSource(seed), 0)
        assert 0 < len(calls) <= n * (n - 1) // 2 + n

    @pytest.mark.parametrize(
        "units, expected",
        [(DistanceUnits.BOX, math.exp(-(1.0 / 20.0) ** 2)), (DistanceUnits.ABSOLUTE, math.exp(-1.0))],
    )
    def test_distance_units(self, units, expected):
        objective = Objective(func=lambda x: float((x[0] - 1.0) ** 2), bounds=Bounds.cube(-10.0, 10.0, 1))
        params = FaParams(population=2, alpha=0.0, distance_units=units)
        population = rank([_state([0.0], objective), _state([1.0], objective)])
        after = step(population, objective, params, RandomSource(0), 0)
        assert sorted(s.position[0] for s in after) == pytest.approx([expected, 1.0])


class TestGlobalBestMode:
    @pytest.mark.parametrize("seed", [0, 3, 9])
    def test_two_fireflies_follow_the_pairwise_trajectory(self, sphere_objective, seed):
        params = FaParams(population=2, max_iterations=6, seed=seed)
        pairwise = run(sphere_objective, params)
        leader_only = run(sphere_objective, pso_limit_equivalence_mode(params))
        assert pairwise.trace == leader_only.trace
        np.testing.assert_array_equal(pairwise.final_positions, leader_only.final_positions)

    def test_noise_free_population_collapses_onto_the_leader(self, sphere_objective):
        params = pso_limit_equivalence_mode(FaParams(population=6, alpha=0.0, gamma=0.0))
        population = rank([_state(p, sphere_objective) for p in sphere_objective.bounds.sample(RandomSource(1), 6)])
        leader = population[0].position.copy()
        after = step(population, sphere_objective, params, RandomSource(1), 0)
        for state in after:
            np.testing.assert_array_equal(state.position, leader)

    def test_zero_gamma_lands_within_noise_of_the_leader(self, sphere_objective):
        params = pso_limit_equivalence_mode(FaParams(population=6, alpha=0.01, gamma=0.0))
        population = rank([_state(p, sphere_objective) for p in sphere_objective.bounds.sample(RandomSource(2), 6)])
        leader = population[0].position.copy()
        after = step(population, sphere_objective, params, RandomSource(2), 0)
        for state in after:
            assert np.linalg.norm(state.position - leader) < 0.1


def test_rank_keeps_index_order_among_ties():
    states = [FireflyState(np.array([float(k)]), 1.0, -1.0) for k in range(4)]
    assert [s.position[0] for s in rank(states)] == [0.0, 1.0, 2.0, 3.0]


class TestRun:
    def test_same_seed_reproduces(self, sphere_objective, small_params):
        first = run(sphere_objective, small_params)
        second = run(sphere_objective, small_params)
        np.testing.assert_array_equal(first.best_position, second.best_position)
        assert first.trace == second.trace
        np.testing.assert_array_equal(first.final_positions, second.final_positions)

    def test_different_seeds_differ(self, sphere_objective, small_params):
        other = small_params.model_copy(update={"seed": 8})
        assert run(sphere_objective, small_params).trace != run(sphere_objective, other).trace

    def test_noise_free_run_is_seed_independent(self, sphere_objective):
        start = sphere_objective.bounds.sample(RandomSource(99), 6)
        results = [
            run(sphere_objective, FaParams(population=6, max_iterations=5, alpha=0.0, seed=seed), initial_positions=start)
            for seed in (1, 2, 3)
        ]
        for result in results[1:]:
            assert result.trace == results[0].trace
            np.testing.assert_array_equal(result.best_position, results[0].best_position)

    @pytest.mark.parametrize("name", ["sphere", "four_peak", "standing_wave", "ackley"])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_best_so_far_is_monotone(self, name, seed):
        objective = get_function(name, 2).objective()
        result = run(objective, FaParams(population=10, max_iterations=8, seed=seed))
        best = [record.best_so_far for record in result.trace]
        pairs = list(zip(best, best[1:]))
        if objective.sense is Sense.MAXIMIZE:
            assert all(b >= a for a, b in pairs)
        else:
            assert all(b <= a for a, b in pairs)
        assert best[-1] == result.best_value

    def test_evaluation_counter_is_exact(self):
        calls = []

        def counted(x):
            calls.append(x.copy())
            return float(np.sum(x**2))

        objective = Objective(func=counted, bounds=Bounds.cube(-3.0, 3.0, 3))
        result = run(objective, FaParams(population=7, max_iterations=6, seed=3))
        assert result.evaluations == len(calls)
        assert result.generation_evaluations == 7 * 6

    def test_best_value_matches_objective_at_best_position(self, sphere_objective, small_params):
        result = run(sphere_objective, small_params)
        assert result.best_value == sphere_objective(result.best_position)

    def test_trace_layout_and_alpha_decay(self, sphere_objective):
        params = FaParams(population=4, max_iterations=3, alpha=0.5, alpha_decay=0.5, seed=1)
        result = run(sphere_objective, params)
        assert [record.iteration for record in result.trace] == [0, 1, 2, 3]
        assert [record.alpha_used for record in result.trace] == [0.0, 0.5, 0.25, 0.125]

    def test_zero_iterations_evaluates_initial_population_only(self, sphere_objective):
        result = run(sphere_objective, FaParams(population=5, max_iterations=0))
        assert result.evaluations == 5
        assert len(result.trace) == 1

    def test_snapshots(self, sphere_objective, small_params):
        result = run(sphere_objective, small_params)
        assert result.initial_positions.shape == (8, 2)
        assert result.final_positions.shape == (8, 2)
        assert len(result.final_values) == 8
        assert all(sphere_objective.bounds.contains(p) for p in result.final_positions)

    def test_maximisation(self):
        objective = get_function("four_peak", 2).objective()
        result = run(objective, FaParams(population=15, max_iterations=10, seed=4))
        assert result.best_value > 0.0
        assert result.best_value == max(record.best_so_far for record in result.trace)

    def test_sense_conflict(self, sphere_objective):
        with pytest.raises(ConfigurationError):
            run(sphere_objective, FaParams(sense=Sense.MAXIMIZE))

    def test_scales_must_match_dimension(self, sphere_objective):
        with pytest.raises(DimensionError):
            run(sphere_objective, FaParams(scales=(1.0, 1.0, 1.0)))

    def test_initial_positions_shape_checked(self, sphere_objective):
        with pytest.raises(DimensionError):
            run(sphere_objective, FaParams(population=3), initial_positions=np.zeros((2, 2)))

    def test_uniform_noise_and_range_scaling(self, sphere_objective):
        params = FaParams(
            population=6,
            max_iterations=4,
            noise=NoiseKind.UNIFORM,
            scales=scales_from_bounds(sphere_objective.bounds),
            seed=2,
        )
        result = run(sphere_objective, params)
        assert all(sphere_objective.bounds.contains(p) for p in result.final_positions)

    def test_global_best_mode(self, sphere_objective, small_params):
        params = pso_limit_equivalence_mode(small_params.model_copy(update={"gamma": 0.0}))
        assert params.global_best_only
        assert not small_params.global_best_only
        result = run(sphere_objective, params)
        assert result.best_value <= result.trace[0].best_so_far

    def test_translation_shifts_the_trajectory(self):
        shift = np.array([0.5, -0.25])
        base = Objective(func=lambda x: float(np.sum(x**2)), bounds=Bounds.cube(-5.0, 5.0, 2))
        moved = Objective(
            func=lambda x: float(np.sum((x - shift) ** 2)),
            bounds=Bounds(base.bounds.lower + shift, base.bounds.upper + shift),
        )
        start = base.bounds.sample(RandomSource(21), 6)
        params = FaParams(population=6, max_iterations=4, seed=5)
        original = run(base, params, initial_positions=start)
        shifted = run(moved, params, initial_positions=start + shift)
        np.testing.assert_allclose(shifted.final_positions, original.final_positions + shift, atol=1e-9)
        np.testing.assert_allclose(shifted.best_position, original.best_position + shift, atol=1e-9)
        assert shifted.best_value == pytest.approx(original.best_value, abs=1e-12)
        assert shifted.evaluations == original.evaluations

    def test_sphere_converges(self):
        objective = get_function("sphere", 2).objective()
        params = FaParams(population=20, max_iterations=40, alpha=0.2, alpha_decay=0.9, gamma=0.01, seed=0)
        result = run(objective, params)
        assert result.best_value < result.trace[0].best_so_far


class TestParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"population": 1},
            {"alpha": -0.1},
            {"beta0": 0.0},
            {"gamma": -1.0},
            {"seed": -1},
            {"seed": 2**64},
            {"alpha_decay": 1.5},
            {"scales": (1.0, 0.0)},
            {"scales": ()},
            {"max_iterations": -1},
            {"unknown": 1},
        ],
    )
    def test_invalid_params(self, kwargs):
        with pytest.raises(ConfigurationError):
            make_params(**kwargs)

    def test_params_are_frozen(self):
        params = FaParams()
        with pytest.raises(Exception):
            params.alpha = 1.0

    def test_alpha_schedule(self):
        params = FaParams(alpha=0.4, alpha_decay=0.5)
        assert params.alpha_at(0) == 0.4
        assert params.alpha_at(2) == 0.1
