"""Reference-point-driven many-objective search (NSGA-III style).

Environmental selection fills the next population with whole
non-domination fronts; when the last front does not fit, the remaining
slots are granted one at a time to the emptiest reference-point niches,
preferring the individual closest to the niche's reference line.
"""

from dataclasses import dataclass, field

import numpy as np

from .data import ConfigurationError, Dataset, SplitSpec
from .evolution import (Population, VariationParams, fast_nondominated_sort,
                        make_rng, random_pairing_offspring, random_population)
from .objectives import EvalConfig, FitnessEvaluator, evaluate_block

RANGE_EPSILON = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    """Run parameters shared by the search engines."""

    pop_size: int = 100
    budget: int = 100_000            # objective evaluations, initial ones included
    divisions: int = 13              # simplex divisions per objective axis
    n_objectives: int = 3
    variation: VariationParams = field(default_factory=VariationParams)
    eval: EvalConfig = field(default_factory=EvalConfig)
    seed: int = 0

    def __post_init__(self):
        if self.pop_size < 1:
            raise ConfigurationError("population size must be positive")
        if self.budget < self.pop_size:
            raise ConfigurationError(
                "evaluation budget is smaller than one population")
        if self.divisions < 1:
            raise ConfigurationError("divisions must be at least 1")


@dataclass(frozen=True)
class Association:
    """Nearest reference point and perpendicular distance per individual."""

    nearest: np.ndarray
    distance: np.ndarray


def das_dennis(n_objectives: int, divisions: int) -> np.ndarray:
    """All simplex lattice points with the given divisions per axis.

    Enumerates, in lexicographic order, every vector whose components
    come from {0, 1/P, ..., 1} and sum to one. Yields the classic
    binomial(P + M - 1, M - 1) point count.
    """
    if n_objectives < 2:
        raise ConfigurationError("need at least two objectives")
    if divisions < 1:
        raise ConfigurationError("divisions must be at least 1")
    points: list = []

    def extend(prefix, remaining, slots):
        if slots == 1:
            points.append(prefix + [remaining])
            return
        for step in range(remaining + 1):
            extend(prefix + [step], remaining - step, slots - 1)

    extend([], divisions, n_objectives)
    return np.array(points, dtype=np.float64) / divisions


def normalize_objectives(objectives: np.ndarray) -> np.ndarray:
    """Shift by the per-objective minimum and scale by the observed range.

    A near-zero range (below 1e-12) scales by one instead, so constant
    objectives normalize to zero rather than dividing by zero.
    """
    objs = np.asarray(objectives, dtype=np.float64)
    ideal = objs.min(axis=0)
    span = objs.max(axis=0) - ideal
    span = np.where(span < RANGE_EPSILON, 1.0, span)
    return (objs - ideal) / span


def associate(normalized: np.ndarray, ref_points: np.ndarray) -> Association:
    """Attach every point to the reference line it is closest to.

    Distance is the Euclidean norm of the point's component orthogonal
    to the line through the origin and the reference point. Ties go to
    the lowest reference-point index.
    """
    points = np.asarray(normalized, dtype=np.float64)
    refs = np.asarray(ref_points, dtype=np.float64)
    scale = (points @ refs.T) / np.sum(refs ** 2, axis=1)[np.newaxis, :]
    rejection = points[:, np.newaxis, :] - scale[:, :, np.newaxis] * refs[np.newaxis, :, :]
    distance = np.linalg.norm(rejection, axis=2)
    nearest = distance.argmin(axis=1)
    return Association(nearest=nearest,
                       distance=distance[np.arange(points.shape[0]), nearest])


def niche_select(k_needed: int, candidate_nearest: np.ndarray,
                 candidate_distance: np.ndarray, niche_counts: np.ndarray,
                 rng: np.random.Generator) -> list:
    """Pick k members of the overflowing front, one niche at a time.

    Each round targets a uniformly random reference point among those
    with the smallest niche count. An empty niche takes its closest
    candidate; an occupied one takes a random candidate. Reference
    points with no remaining candidates are retired for the rest of the
    call.
    """
    if k_needed > candidate_nearest.shape[0]:
        raise ConfigurationError("cannot select more members than the front holds")
    counts = np.asarray(niche_counts, dtype=np.int64).copy()
    active = np.ones(counts.shape[0], dtype=bool)
    available = np.ones(candidate_nearest.shape[0], dtype=bool)
    chosen: list = []
    while len(chosen) < k_needed:
        if not active.any():
            raise RuntimeError(
                "all reference points retired before the niche quota was met")
        active_ids = np.where(active)[0]
        lowest = counts[active_ids].min()
        sparse = active_ids[counts[active_ids] == lowest]
        target = int(sparse[rng.integers(sparse.shape[0])])
        members = np.where(available & (candidate_nearest == target))[0]
        if members.size == 0:
            active[target] = False
            continue
        if counts[target] == 0:
            pick = int(members[np.argmin(candidate_distance[members])])
        else:
            pick = int(members[rng.integers(members.size)])
        chosen.append(pick)
        counts[target] += 1
        available[pick] = False
    return chosen


def environmental_selection(positions: np.ndarray, objectives: np.ndarray,
                            pop_size: int, ref_points: np.ndarray,
                            rng: np.random.Generator):
    """Reduce a merged parent+offspring pool to the next population."""
    partition = fast_nondominated_sort(objectives)
    taken: list = []
    total = 0
    for front in partition.fronts:
        taken.append(front)
        total += front.size
        if total >= pop_size:
            break
    if total == pop_size:
        keep = np.concatenate(taken)
        return positions[keep], objectives[keep]

    last = taken[-1]
    head = np.concatenate(taken[:-1]) if len(taken) > 1 else np.empty(0, dtype=np.int64)
    slots = pop_size - head.size
    pool = np.concatenate([head, last])
    assoc = associate(normalize_objectives(objectives[pool]), ref_points)
    counts = np.bincount(assoc.nearest[:head.size], minlength=ref_points.shape[0])
    local = niche_select(slots, assoc.nearest[head.size:],
                         assoc.distance[head.size:], counts, rng)
    keep = np.concatenate([head, last[local]])
    return positions[keep], objectives[keep]


def evolve(dataset: Dataset, split: SplitSpec, config: SearchConfig) -> Population:
    """Run the reference-point search until the evaluation budget is spent.

    Starts from a uniform random population, then repeats: generate as
    many offspring as parents by shuffled pairing, evaluate them, and
    reduce the merged pool by front rank plus niche preservation. The
    loop stops once the number of evaluated candidates reaches the
    budget; a budget equal to the population size returns the evaluated
    initial population.
    """
    refs = das_dennis(config.n_objectives, config.divisions)
    rng = make_rng(config.seed)
    evaluator = FitnessEvaluator(dataset, split, config.eval)
    positions = random_population(config.pop_size, dataset.feature_count, rng)
    objectives = evaluate_block(evaluator, positions)
    evaluations = config.pop_size

    while evaluations < config.budget:
        offspring = random_pairing_offspring(positions, config.variation, rng)
        offspring_objs = evaluate_block(evaluator, offspring)
        evaluations += offspring.shape[0]
        positions, objectives = environmental_selection(
            np.vstack([positions, offspring]),
            np.vstack([objectives, offspring_objs]),
            config.pop_size, refs, rng)

    partition = fast_nondominated_sort(objectives)
    masks = np.array([evaluator.mask_for(row) for row in positions])
    return Population(positions=positions, masks=masks, objectives=objectives,
                      ranks=partition.ranks, evaluations=evaluations)
