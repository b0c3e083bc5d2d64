"""Shared evolutionary machinery: dominance, sorting, variation operators.

Everything here is algorithm-agnostic and consumed by both search
engines. All randomness flows through a single generator passed in by
the caller, and every operation with potential ties resolves them by
ascending index, so a seed fully determines a run.
"""

from dataclasses import dataclass

import numpy as np

from .rng import make_rng  # re-exported; the pinned generator lives in rng.py

__all__ = [
    "make_rng", "dominates", "fast_nondominated_sort", "FrontPartition",
    "VariationParams", "sbx_crossover", "polynomial_mutation",
    "random_population", "random_pairing_offspring", "Population",
]


@dataclass(frozen=True)
class FrontPartition:
    """Population indices grouped by non-domination rank."""

    fronts: list            # list of np.ndarray of indices, best front first
    ranks: np.ndarray       # (N,) 1-based rank per individual


@dataclass(frozen=True)
class VariationParams:
    crossover_prob: float = 1.0
    crossover_eta: float = 30.0
    mutation_prob: float | None = None   # None means 1/n at application time
    mutation_eta: float = 20.0
    lower: float = 0.0
    upper: float = 1.0


@dataclass(frozen=True)
class Population:
    """Final state of a search run."""

    positions: np.ndarray    # (N, n) real-coded candidates
    masks: np.ndarray        # (N, n) bool, thresholded and repaired
    objectives: np.ndarray   # (N, 3) minimized objective values
    ranks: np.ndarray        # (N,) 1-based non-domination ranks
    evaluations: int

    def front_indices(self) -> np.ndarray:
        return np.where(self.ranks == 1)[0]


def dominates(a, b) -> bool:
    """Pareto dominance with every objective minimized."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("objective vectors differ in length")
    return bool(np.all(a <= b) and np.any(a < b))


def fast_nondominated_sort(objectives: np.ndarray) -> FrontPartition:
    """Partition objective vectors into successive non-dominated fronts.

    Computes the full pairwise dominance relation, then repeatedly peels
    the set of individuals whose remaining dominator count is zero.
    """
    objs = np.asarray(objectives, dtype=np.float64)
    if objs.ndim != 2 or objs.shape[0] == 0:
        raise ValueError("need a non-empty (N, M) objective array")
    n = objs.shape[0]
    less_equal = np.all(objs[:, np.newaxis, :] <= objs[np.newaxis, :, :], axis=2)
    strictly_less = np.any(objs[:, np.newaxis, :] < objs[np.newaxis, :, :], axis=2)
    dominated_by = less_equal & strictly_less      # [i, j]: i dominates j

    dominator_count = dominated_by.sum(axis=0)
    ranks = np.zeros(n, dtype=np.int64)
    fronts = []
    current = np.where(dominator_count == 0)[0]
    rank = 1
    while current.size:
        ranks[current] = rank
        fronts.append(current)
        dominator_count = dominator_count - dominated_by[current].sum(axis=0)
        current = np.where((dominator_count == 0) & (ranks == 0))[0]
        rank += 1
    return FrontPartition(fronts=fronts, ranks=ranks)


def sbx_crossover(parent1: np.ndarray, parent2: np.ndarray,
                  params: VariationParams, rng: np.random.Generator):
    """Simulated binary crossover; returns two children clamped to bounds.

    With probability 1 - crossover_prob the parents are copied verbatim.
    Otherwise every variable draws a spread factor from the eta_c
    polynomial distribution, producing children symmetric about the
    parent midpoint.
    """
    if parent1.shape != parent2.shape:
        raise ValueError("parents differ in length")
    if rng.random() > params.crossover_prob:
        return parent1.copy(), parent2.copy()

    u = rng.random(parent1.shape[0])
    beta = np.where(u <= 0.5,
                    (2.0 * u) ** (1.0 / (params.crossover_eta + 1.0)),
                    (0.5 / (1.0 - u)) ** (1.0 / (params.crossover_eta + 1.0)))
    # Random per-variable side swap keeps each child centered on the
    # parent midpoint rather than biased toward one parent.
    beta = np.where(rng.random(parent1.shape[0]) < 0.5, -beta, beta)
    mid = 0.5 * (parent1 + parent2)
    diff = 0.5 * (parent2 - parent1)
    child1 = np.clip(mid - beta * diff, params.lower, params.upper)
    child2 = np.clip(mid + beta * diff, params.lower, params.upper)
    return child1, child2


def polynomial_mutation(candidate: np.ndarray, params: VariationParams,
                        rng: np.random.Generator) -> np.ndarray:
    """Polynomial mutation with boundary-aware perturbation.

    Each variable mutates independently with probability mutation_prob
    (1/n by default). The perturbation shrinks near the bounds, so a
    variable sitting at a bound can only move inward.
    """
    n = candidate.shape[0]
    prob = params.mutation_prob if params.mutation_prob is not None else 1.0 / n
    span = params.upper - params.lower
    sites = rng.random(n) < prob
    u = rng.random(n)

    result = candidate.copy()
    if not sites.any():
        return result
    x = result[sites]
    uu = u[sites]
    eta = params.mutation_eta
    delta_low = (x - params.lower) / span
    delta_high = (params.upper - x) / span
    exponent = 1.0 / (eta + 1.0)
    delta_q = np.where(
        uu < 0.5,
        (2.0 * uu + (1.0 - 2.0 * uu) * (1.0 - delta_low) ** (eta + 1.0))
        ** exponent - 1.0,
        1.0 - (2.0 * (1.0 - uu) + 2.0 * (uu - 0.5)
               * (1.0 - delta_high) ** (eta + 1.0)) ** exponent)
    result[sites] = np.clip(x + delta_q * span, params.lower, params.upper)
    return result


def random_population(pop_size: int, n_vars: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Uniform random candidates in [0, 1]^n; shared by all engines."""
    return rng.random((pop_size, n_vars))


def random_pairing_offspring(parents: np.ndarray, params: VariationParams,
                             rng: np.random.Generator) -> np.ndarray:
    """Produce len(parents) offspring by shuffled pairing, SBX and mutation.

    No mating pressure: parents are paired by a random permutation. An
    odd leftover parent contributes one mutated copy of itself.
    """
    count, n_vars = parents.shape
    order = rng.permutation(count)
    offspring = np.empty_like(parents)
    out = 0
    for pair_start in range(0, count - 1, 2):
        p1 = parents[order[pair_start]]
        p2 = parents[order[pair_start + 1]]
        c1, c2 = sbx_crossover(p1, p2, params, rng)
        offspring[out] = polynomial_mutation(c1, params, rng)
        offspring[out + 1] = polynomial_mutation(c2, params, rng)
        out += 2
    if count % 2:
        leftover = parents[order[-1]]
        offspring[out] = polynomial_mutation(leftover.copy(), params, rng)
    return offspring
