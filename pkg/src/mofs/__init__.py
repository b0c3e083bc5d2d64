"""Three-objective feature selection for incomplete tabular datasets.

Candidate feature subsets are searched with reference-point
(NSGA-III-style) and crowding-distance (NSGA-II-style) evolutionary
engines, scored by a cross-validated K-NN wrapper on three minimized
objectives: classification error rate, subset size, and the share of
the dataset's missing cells covered by the subset.
"""

from .data import (ConfigurationError, DataError, Dataset, MissingProfile,
                   RawTable, SplitSpec, impute_mean, load_csv, load_dataset,
                   normalize, profile_report, split)
from .evolution import (FrontPartition, Population, VariationParams, dominates,
                        fast_nondominated_sort, make_rng, polynomial_mutation,
                        sbx_crossover)
from .knn import AccuracyResult, KnnConfig, cross_validated_accuracy, knn_predict
from .metrics import (HvConfig, ReferenceSet, TTestResult, build_reference_set,
                      hypervolume_3d, igd, nondominated_filter, welch_t_test)
from .nsga3 import SearchConfig, associate, das_dennis, normalize_objectives
from .objectives import (EvalConfig, FitnessEvaluator, ObjectiveVector, binarize,
                         evaluate, evaluate_on_test, repair_empty,
                         selected_missing)

__version__ = "0.1.0"
