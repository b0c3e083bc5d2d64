"""Pure random search given the same evaluation budget as the engines.

Serves as the floor any evolutionary selection scheme should beat: it
samples the whole budget uniformly at random and keeps the
non-dominated subset of everything it saw.
"""

import numpy as np

from .data import Dataset, SplitSpec
from .evolution import Population, make_rng, random_population
from .metrics import nondominated_filter
from .nsga3 import SearchConfig
from .objectives import FitnessEvaluator, evaluate_block

_BATCH = 1000


def evolve(dataset: Dataset, split: SplitSpec, config: SearchConfig) -> Population:
    """Sample `budget` uniform candidates and return their first front.

    Candidates are drawn and evaluated in batches, folding each batch
    into a running non-dominated archive; the draw sequence is identical
    to sampling the whole budget at once.
    """
    rng = make_rng(config.seed)
    evaluator = FitnessEvaluator(dataset, split, config.eval)
    archive_pos = np.empty((0, dataset.feature_count))
    archive_obj = np.empty((0, 3))

    remaining = config.budget
    while remaining > 0:
        batch = min(_BATCH, remaining)
        remaining -= batch
        positions = random_population(batch, dataset.feature_count, rng)
        objectives = evaluate_block(evaluator, positions)
        pooled_pos = np.vstack([archive_pos, positions])
        pooled_obj = np.vstack([archive_obj, objectives])
        keep = nondominated_filter(pooled_obj)
        archive_pos = pooled_pos[keep]
        archive_obj = pooled_obj[keep]

    masks = np.array([evaluator.mask_for(row) for row in archive_pos])
    return Population(positions=archive_pos, masks=masks,
                      objectives=archive_obj,
                      ranks=np.ones(archive_obj.shape[0], dtype=np.int64),
                      evaluations=config.budget)
