"""Crowding-distance baseline search (NSGA-II style).

Shares the encoding, objectives, variation operators and sorting with
the reference-point engine, but fills the last front by descending
crowding distance and mates parents through binary tournaments on
(rank, crowding), the baseline's canonical form.
"""

import numpy as np

from .data import Dataset, SplitSpec
from .evolution import (Population, VariationParams, fast_nondominated_sort,
                        make_rng, polynomial_mutation, random_population,
                        sbx_crossover)
from .nsga3 import SearchConfig
from .objectives import FitnessEvaluator, evaluate_block


def crowding_distance(front_objectives: np.ndarray) -> np.ndarray:
    """Per-objective normalized neighbor gaps, infinite at the extremes.

    Fronts of one or two members are all-infinite; an objective with
    zero range contributes nothing to interior members.
    """
    objs = np.asarray(front_objectives, dtype=np.float64)
    count = objs.shape[0]
    if count == 0:
        raise ValueError("empty front")
    if count <= 2:
        return np.full(count, np.inf)
    distance = np.zeros(count)
    for col in range(objs.shape[1]):
        order = np.argsort(objs[:, col], kind="stable")
        values = objs[order, col]
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        span = values[-1] - values[0]
        if span == 0.0:
            continue
        interior = order[1:-1]
        gaps = (values[2:] - values[:-2]) / span
        distance[interior] = distance[interior] + gaps
    return distance


def _descending_by_crowding(crowding: np.ndarray) -> np.ndarray:
    # Descending crowding, ties broken by ascending position.
    return np.lexsort((np.arange(crowding.shape[0]), -crowding))


def _rank_and_crowding(objectives: np.ndarray):
    partition = fast_nondominated_sort(objectives)
    crowding = np.empty(objectives.shape[0])
    for front in partition.fronts:
        crowding[front] = crowding_distance(objectives[front])
    return partition.ranks, crowding


def _tournament(rng, ranks, crowding) -> int:
    a = int(rng.integers(ranks.shape[0]))
    b = int(rng.integers(ranks.shape[0]))
    if ranks[a] != ranks[b]:
        return a if ranks[a] < ranks[b] else b
    if crowding[a] != crowding[b]:
        return a if crowding[a] > crowding[b] else b
    return a


def _tournament_offspring(positions: np.ndarray, objectives: np.ndarray,
                          params: VariationParams,
                          rng: np.random.Generator) -> np.ndarray:
    ranks, crowding = _rank_and_crowding(objectives)
    count = positions.shape[0]
    children: list = []
    while len(children) < count:
        p1 = positions[_tournament(rng, ranks, crowding)]
        p2 = positions[_tournament(rng, ranks, crowding)]
        c1, c2 = sbx_crossover(p1, p2, params, rng)
        children.append(polynomial_mutation(c1, params, rng))
        children.append(polynomial_mutation(c2, params, rng))
    return np.array(children[:count])


def environmental_selection(positions: np.ndarray, objectives: np.ndarray,
                            pop_size: int):
    """Keep whole fronts, then truncate the last one by crowding."""
    partition = fast_nondominated_sort(objectives)
    keep: list = []
    total = 0
    for front in partition.fronts:
        if total + front.size <= pop_size:
            keep.append(front)
            total += front.size
            if total == pop_size:
                break
        else:
            crowding = crowding_distance(objectives[front])
            order = _descending_by_crowding(crowding)
            keep.append(front[order[:pop_size - total]])
            break
    chosen = np.concatenate(keep)
    return positions[chosen], objectives[chosen]


def evolve(dataset: Dataset, split: SplitSpec, config: SearchConfig) -> Population:
    """Run the crowding-distance search until the budget is spent.

    Generation zero is identical to the reference-point engine's for the
    same seed (shared initializer and generator), which isolates the
    effect of the selection scheme when comparing the two.
    """
    rng = make_rng(config.seed)
    evaluator = FitnessEvaluator(dataset, split, config.eval)
    positions = random_population(config.pop_size, dataset.feature_count, rng)
    objectives = evaluate_block(evaluator, positions)
    evaluations = config.pop_size

    while evaluations < config.budget:
        offspring = _tournament_offspring(positions, objectives,
                                          config.variation, rng)
        offspring_objs = evaluate_block(evaluator, offspring)
        evaluations += offspring.shape[0]
        positions, objectives = environmental_selection(
            np.vstack([positions, offspring]),
            np.vstack([objectives, offspring_objs]), config.pop_size)

    partition = fast_nondominated_sort(objectives)
    masks = np.array([evaluator.mask_for(row) for row in positions])
    return Population(positions=positions, masks=masks, objectives=objectives,
                      ranks=partition.ranks, evaluations=evaluations)
