"""Front quality indicators: IGD, exact 3-D hypervolume, Welch's t-test.

Hypervolume and IGD operate on normalized objective triples: the error
rate is already in [0, 1], the subset size is divided by the feature
count and the missing percentage by 100, so the default reference point
of 1.1 per axis makes volumes comparable across datasets.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class HvConfig:
    """Reference point and per-objective divisors for hypervolume."""

    reference: tuple = (1.1, 1.1, 1.1)
    divisors: tuple = (1.0, 1.0, 1.0)

    @classmethod
    def for_feature_count(cls, n_features: int, reference_value: float = 1.1):
        return cls(reference=(reference_value,) * 3,
                   divisors=(1.0, float(n_features), 100.0))


@dataclass(frozen=True)
class ReferenceSet:
    """Target points for IGD plus a note on how they were built."""

    points: np.ndarray
    provenance: str


@dataclass(frozen=True)
class TTestResult:
    statistic: float
    p_value: float
    verdict: str            # "+" first sample better, "-" second, "=" no difference


def nondominated_filter(points: np.ndarray) -> np.ndarray:
    """Indices of the non-dominated, deduplicated subset (first wins)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need a non-empty (N, M) point array")
    keep: list = []
    for i, candidate in enumerate(pts):
        dominated = False
        for j in keep:
            other = pts[j]
            if np.all(other <= candidate) and np.any(other < candidate):
                dominated = True
                break
            if np.array_equal(other, candidate):
                dominated = True
                break
        if dominated:
            continue
        keep = [j for j in keep
                if not (np.all(candidate <= pts[j]) and np.any(candidate < pts[j]))]
        keep.append(i)
    return np.array(sorted(keep), dtype=np.int64)


def build_reference_set(fronts, provenance: str = "") -> ReferenceSet:
    """Non-dominated union of every provided front, deduplicated."""
    stacked = [np.asarray(front, dtype=np.float64) for front in fronts
               if np.asarray(front).size]
    if not stacked:
        raise ValueError("need at least one non-empty front")
    union = np.vstack(stacked)
    keep = nondominated_filter(union)
    note = provenance or (
        f"non-dominated union of {len(stacked)} fronts "
        f"({union.shape[0]} points pooled)")
    return ReferenceSet(points=union[keep], provenance=note)


def igd(front: np.ndarray, reference: np.ndarray) -> float:
    """Mean distance from each reference point to its nearest front point."""
    d = np.asarray(front, dtype=np.float64)
    z = np.asarray(reference, dtype=np.float64)
    if d.size == 0 or z.size == 0:
        raise ValueError("front and reference set must be non-empty")
    if d.shape[1] != z.shape[1]:
        raise ValueError("front and reference set dimensionality differ")
    squared = ((z[:, np.newaxis, :] - d[np.newaxis, :, :]) ** 2).sum(axis=2)
    nearest = np.sqrt(squared.min(axis=1))
    # Plain left-to-right accumulation keeps the result identical to a
    # scalar double-loop evaluation.
    total = 0.0
    for value in nearest:
        total += float(value)
    return total / z.shape[0]


def _hv_2d(points: np.ndarray, ref_b: float, ref_c: float) -> float:
    """Area dominated by 2-D points within the (ref_b, ref_c) corner."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    area = 0.0
    ceiling = ref_c
    for b, c in points[order]:
        if c < ceiling:
            area += (ref_b - b) * (ceiling - c)
            ceiling = c
    return area


def hypervolume_3d(front: np.ndarray, cfg: HvConfig = HvConfig()) -> float:
    """Exact volume dominated by a 3-objective front, up to the reference.

    Objectives are scaled by the configured divisors first; points not
    weakly inside the reference box are dropped. The volume is swept in
    slabs along the first objective, each slab contributing the 2-D area
    of the points that reach it.
    """
    pts = np.asarray(front, dtype=np.float64)
    if pts.size == 0:
        return 0.0
    if pts.shape[1] != 3:
        raise ValueError("hypervolume_3d expects exactly three objectives")
    ref = np.asarray(cfg.reference, dtype=np.float64)
    pts = pts / np.asarray(cfg.divisors, dtype=np.float64)[np.newaxis, :]
    pts = pts[np.all(pts <= ref[np.newaxis, :], axis=1)]
    if pts.shape[0] == 0:
        return 0.0

    cuts = np.unique(pts[:, 0])
    boundaries = np.append(cuts, ref[0])
    volume = 0.0
    for i, cut in enumerate(cuts):
        thickness = boundaries[i + 1] - boundaries[i]
        if thickness <= 0.0:
            continue
        reached = pts[pts[:, 0] <= cut][:, 1:]
        volume += thickness * _hv_2d(reached, ref[1], ref[2])
    return volume


def welch_t_test(sample_a, sample_b, smaller_is_better: bool = True) -> TTestResult:
    """Two-sided Welch test; the verdict says which sample's mean is better.

    "+" means sample_a is significantly better at the 95% level, "-"
    means sample_b is, "=" means no significant difference. Zero
    variance in both samples degenerates to "=" for equal means and to a
    significant verdict for unequal ones.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("both samples need at least two observations")
    mean_a, mean_b = a.mean(), b.mean()
    var_a = a.var(ddof=1)
    var_b = b.var(ddof=1)
    se_sq = var_a / a.size + var_b / b.size

    if se_sq == 0.0:
        if mean_a == mean_b:
            return TTestResult(statistic=0.0, p_value=1.0, verdict="=")
        statistic = math.inf if mean_a > mean_b else -math.inf
        p_value = 0.0
    else:
        statistic = (mean_a - mean_b) / math.sqrt(se_sq)
        df = se_sq ** 2 / (
            (var_a / a.size) ** 2 / (a.size - 1)
            + (var_b / b.size) ** 2 / (b.size - 1))
        # Two-sided p via the regularized incomplete beta form of the
        # t CDF: P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2).
        p_value = float(special.betainc(df / 2.0, 0.5,
                                        df / (df + statistic ** 2)))

    if p_value >= SIGNIFICANCE_LEVEL:
        return TTestResult(statistic=statistic, p_value=p_value, verdict="=")
    a_is_better = mean_a < mean_b if smaller_is_better else mean_a > mean_b
    return TTestResult(statistic=statistic, p_value=p_value,
                       verdict="+" if a_is_better else "-")
