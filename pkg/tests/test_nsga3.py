"""Reference points, association, niching and the full engine loop."""

import math

import numpy as np
import pytest

from conftest import make_synthetic_dataset
from mofs.data import ConfigurationError, split
from mofs.evolution import dominates, fast_nondominated_sort, make_rng, random_population
from mofs.knn import KnnConfig
from mofs.nsga3 import (SearchConfig, associate, das_dennis,
                        environmental_selection, evolve, niche_select,
                        normalize_objectives)
from mofs.objectives import EvalConfig


def small_eval_config() -> EvalConfig:
    return EvalConfig(threshold=0.6, knn=KnnConfig(neighbors=3, folds=5))


def perpendicular_distance_oracle(point, ref) -> float:
    # Independent formulation: Pythagoras against the unit direction.
    direction = ref / np.linalg.norm(ref)
    along = float(np.dot(point, direction))
    return math.sqrt(max(0.0, float(np.dot(point, point)) - along * along))


class TestDasDennis:
    def test_four_divisions_give_fifteen_points_with_corners(self):
        points = das_dennis(3, 4)
        assert points.shape == (15, 3)
        as_tuples = {tuple(p) for p in points}
        assert {(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)} <= as_tuples
        assert len(as_tuples) == 15

    def test_every_point_sums_to_one(self):
        points = das_dennis(3, 4)
        assert np.all(np.abs(points.sum(axis=1) - 1.0) < 1e-12)

    def test_one_division_gives_the_unit_vectors(self):
        points = das_dennis(3, 1)
        assert sorted(map(tuple, points)) == [(0.0, 0.0, 1.0),
                                              (0.0, 1.0, 0.0),
                                              (1.0, 0.0, 0.0)]

    def test_thirteen_divisions_match_the_binomial_count(self):
        assert das_dennis(3, 13).shape[0] == math.comb(15, 2) == 105

    def test_points_are_emitted_in_lexicographic_order(self):
        points = das_dennis(3, 5)
        as_lists = [tuple(p) for p in points]
        assert as_lists == sorted(as_lists)

    def test_component_values_come_from_the_division_grid(self):
        points = das_dennis(3, 4)
        scaled = points * 4
        assert np.all(np.abs(scaled - np.round(scaled)) < 1e-12)

    def test_invalid_arguments_are_rejected(self):
        with pytest.raises(ConfigurationError):
            das_dennis(1, 4)
        with pytest.raises(ConfigurationError):
            das_dennis(3, 0)


class TestNormalizeObjectives:
    def test_unit_spanning_axes_pass_through(self):
        objs = np.array([[0.0, 1.0, 0.5], [1.0, 0.0, 0.0], [0.5, 0.5, 1.0]])
        assert np.array_equal(normalize_objectives(objs), objs)

    def test_constant_axis_collapses_to_zero(self):
        objs = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
        normalized = normalize_objectives(objs)
        assert normalized[:, 1].tolist() == [0.0, 0.0, 0.0]
        assert normalized[:, 0].tolist() == [0.0, 0.5, 1.0]

    def test_two_point_min_max(self):
        objs = np.array([[2.0, 10.0, 0.0], [4.0, 20.0, 0.0]])
        normalized = normalize_objectives(objs)
        assert normalized.tolist() == [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0]]


class TestAssociate:
    def test_point_on_the_reference_line_has_zero_distance(self):
        refs = np.array([[0.5, 0.5, 0.0], [0.0, 0.0, 1.0]])
        assoc = associate(np.array([[0.3, 0.3, 0.0]]), refs)
        assert assoc.nearest[0] == 0
        assert assoc.distance[0] == pytest.approx(0.0, abs=1e-15)

    def test_orthogonal_unit_point_has_distance_one(self):
        refs = np.array([[0.0, 1.0, 0.0]])
        assoc = associate(np.array([[1.0, 0.0, 0.0]]), refs)
        assert assoc.distance[0] == pytest.approx(1.0)

    def test_matches_brute_force_oracle_on_the_full_lattice(self):
        refs = das_dennis(3, 13)
        rng = np.random.default_rng(31)
        points = rng.random((60, 3))
        assoc = associate(points, refs)
        for i, point in enumerate(points):
            oracle = np.array([perpendicular_distance_oracle(point, r)
                               for r in refs])
            assert assoc.nearest[i] == int(oracle.argmin())
            assert assoc.distance[i] == pytest.approx(oracle.min(), abs=1e-12)


class TestNicheSelect:
    def test_selecting_the_whole_front_takes_everyone(self):
        nearest = np.array([0, 0, 1, 2])
        distance = np.array([0.3, 0.1, 0.2, 0.4])
        counts = np.array([5, 0, 0])
        chosen = niche_select(4, nearest, distance, counts, make_rng(1))
        assert sorted(chosen) == [0, 1, 2, 3]

    def test_empty_niche_takes_its_closest_member(self):
        nearest = np.array([0, 0])
        distance = np.array([0.1, 0.5])
        chosen = niche_select(1, nearest, distance, np.array([0]), make_rng(2))
        assert chosen == [0]

    def test_occupied_niche_with_single_member_is_forced(self):
        nearest = np.array([0])
        distance = np.array([0.9])
        chosen = niche_select(1, nearest, distance, np.array([3]), make_rng(3))
        assert chosen == [0]

    def test_unreachable_reference_points_are_retired(self):
        # Reference point 0 has the lowest count but no candidates, so
        # the selector must retire it and fill from reference point 1.
        nearest = np.array([1, 1])
        distance = np.array([0.2, 0.1])
        counts = np.array([0, 7])
        chosen = niche_select(2, nearest, distance, counts, make_rng(4))
        assert sorted(chosen) == [0, 1]

    def test_requesting_more_than_the_front_holds_is_rejected(self):
        with pytest.raises(ConfigurationError):
            niche_select(3, np.array([0]), np.array([0.1]), np.array([0]),
                         make_rng(5))

    def test_selection_is_deterministic_per_seed(self):
        rng_state = np.random.default_rng(32)
        nearest = rng_state.integers(0, 8, size=30)
        distance = rng_state.random(30)
        counts = rng_state.integers(0, 3, size=8)
        first = niche_select(12, nearest, distance, counts, make_rng(6))
        second = niche_select(12, nearest, distance, counts, make_rng(6))
        assert first == second


class TestEnvironmentalSelection:
    def test_whole_fronts_enter_before_any_niching(self):
        rng = np.random.default_rng(33)
        objs = np.round(rng.random((40, 3)), 1)
        ids = np.arange(40, dtype=np.float64)[:, np.newaxis]
        refs = das_dennis(3, 4)
        selected_ids, selected_objs = environmental_selection(
            ids, objs, 20, refs, make_rng(7))
        assert selected_ids.shape[0] == 20

        partition = fast_nondominated_sort(objs)
        chosen = set(int(v) for v in selected_ids[:, 0])
        total = 0
        for front in partition.fronts:
            if total + front.size <= 20:
                assert set(front.tolist()) <= chosen
                total += front.size
            else:
                overflow = set(front.tolist()) & chosen
                assert len(overflow) == 20 - total
                break

    def test_exact_fit_skips_niching_entirely(self):
        # A chain of dominated points has one-element fronts, so any
        # target size is an exact fit of whole fronts.
        objs = np.array([[i, i, i] for i in range(10)], dtype=np.float64)
        ids = np.arange(10, dtype=np.float64)[:, np.newaxis]
        selected_ids, _ = environmental_selection(ids, objs, 4, das_dennis(3, 4),
                                                  make_rng(8))
        assert sorted(int(v) for v in selected_ids[:, 0]) == [0, 1, 2, 3]


class TestEvolve:
    def test_budget_equal_to_population_returns_generation_zero(self):
        ds = make_synthetic_dataset(seed=1, n_instances=60, n_features=8)
        spec = split(ds, seed=2, folds=5)
        cfg = SearchConfig(pop_size=12, budget=12, divisions=4, seed=5,
                           eval=small_eval_config())
        population = evolve(ds, spec, cfg)
        assert population.evaluations == 12
        expected = random_population(12, 8, make_rng(5))
        assert np.array_equal(population.positions, expected)

    def test_population_size_is_preserved_and_front_is_clean(self):
        ds = make_synthetic_dataset(seed=2, n_instances=80, n_features=10)
        spec = split(ds, seed=3, folds=5)
        cfg = SearchConfig(pop_size=16, budget=160, divisions=6, seed=6,
                           eval=small_eval_config())
        population = evolve(ds, spec, cfg)
        assert population.positions.shape == (16, 10)
        front = population.front_indices()
        for i in front:
            for j in front:
                assert not dominates(population.objectives[i],
                                     population.objectives[j])

    def test_same_seed_reproduces_the_run_exactly(self):
        ds = make_synthetic_dataset(seed=3, n_instances=60, n_features=8)
        spec = split(ds, seed=4, folds=5)
        cfg = SearchConfig(pop_size=10, budget=60, divisions=4, seed=7,
                           eval=small_eval_config())
        a = evolve(ds, spec, cfg)
        b = evolve(ds, spec, cfg)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.objectives, b.objectives)
        assert np.array_equal(a.ranks, b.ranks)

    def test_complete_dataset_collapses_the_third_objective(self):
        ds = make_synthetic_dataset(seed=4, n_instances=60, n_features=8,
                                    missing_fraction=0.0)
        spec = split(ds, seed=5, folds=5)
        cfg = SearchConfig(pop_size=10, budget=40, divisions=4, seed=8,
                           eval=small_eval_config())
        population = evolve(ds, spec, cfg)
        assert np.all(population.objectives[:, 2] == 0.0)

    def test_budget_below_one_population_is_rejected(self):
        with pytest.raises(ConfigurationError):
            SearchConfig(pop_size=10, budget=5)
