"""External clustering quality measures and multi-run aggregation.

All measures compare a predicted label vector against ground truth. AVG
(conditional entropy of the truth within each predicted cluster, in bits)
is the only lower-is-better measure.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

METRIC_NAMES = ("NMI", "ACC", "F-score", "AVG", "P")


def _check_pair(pred, truth):
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ValueError(
            f"label vectors must be 1-D and equal length, got {pred.shape} vs {truth.shape}"
        )
    return pred, truth


def contingency(pred, truth):
    """c_pred x c_true count matrix."""
    pred, truth = _check_pair(pred, truth)
    cp = int(pred.max()) + 1
    ct = int(truth.max()) + 1
    table = np.zeros((cp, ct), dtype=np.int64)
    np.add.at(table, (pred, truth), 1)
    return table


def nmi(pred, truth):
    """Normalized mutual information with sqrt(H*H) normalization.

    Returns 1 for identical partitions (including the single-cluster pair)
    and 0 when either partition carries no information while they differ.
    """
    table = contingency(pred, truth)
    n = table.sum()
    p_joint = table / n
    p_pred = p_joint.sum(axis=1)
    p_true = p_joint.sum(axis=0)
    # Entropy is zero exactly when one cluster holds everything; test the
    # counts rather than the float entropy, which can round to ~1e-16.
    pred_single = int(np.count_nonzero(table.sum(axis=1))) == 1
    true_single = int(np.count_nonzero(table.sum(axis=0))) == 1
    if pred_single or true_single:
        return 1.0 if pred_single and true_single else 0.0
    h_pred = -np.sum(p_pred[p_pred > 0] * np.log(p_pred[p_pred > 0]))
    h_true = -np.sum(p_true[p_true > 0] * np.log(p_true[p_true > 0]))
    nz = p_joint > 0
    mi = np.sum(p_joint[nz] * np.log(p_joint[nz] / np.outer(p_pred, p_true)[nz]))
    return float(min(1.0, max(0.0, mi / np.sqrt(h_pred * h_true))))


def acc(pred, truth):
    """Clustering accuracy under the best label bijection (Hungarian method).

    The contingency table is padded square with zero-benefit rows/columns
    when the cluster counts differ.
    """
    table = contingency(pred, truth)
    n = table.sum()
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum() / n)


def pairwise_scores(pred, truth):
    """(precision, recall, f_score) over all unordered sample pairs.

    A pair counts as TP when both labelings group it together. Empty
    denominators follow the vacuous-truth convention: precision/recall
    default to 1, the F-score to 0 when both are 0.
    """
    pred, truth = _check_pair(pred, truth)
    if pred.size < 2:
        raise ValueError("need at least two samples for pairwise scores")
    table = contingency(pred, truth)

    def pairs(counts):
        return float(np.sum(counts * (counts - 1) // 2))

    tp = pairs(table)
    together_pred = pairs(table.sum(axis=1))
    together_true = pairs(table.sum(axis=0))
    fp = together_pred - tp
    fn = together_true - tp
    precision = tp / (tp + fp) if (tp + fp) > 0 else 1.0
    recall = tp / (tp + fn) if (tp + fn) > 0 else 1.0
    f = 2 * precision * recall / (precision + recall) if (precision + recall) > 0 else 0.0
    return precision, recall, f


def avgent(pred, truth):
    """Size-weighted base-2 entropy of the truth within each predicted
    cluster; 0 iff every predicted cluster is pure."""
    table = contingency(pred, truth)
    n = table.sum()
    total = 0.0
    for row in table:
        nj = row.sum()
        if nj == 0:
            continue
        p = row[row > 0] / nj
        total += (nj / n) * float(-np.sum(p * np.log2(p)))
    return total


def score_labels(pred, truth):
    """All five measures as a dict keyed by METRIC_NAMES."""
    precision, _, f = pairwise_scores(pred, truth)
    return {
        "NMI": nmi(pred, truth),
        "ACC": acc(pred, truth),
        "F-score": f,
        "AVG": avgent(pred, truth),
        "P": precision,
    }


@dataclass
class MetricsReport:
    """Per-metric mean and population (N-divisor) standard deviation."""

    means: dict
    stds: dict
    runs: int


def aggregate(run_scores) -> MetricsReport:
    """Aggregate per-run metric dicts into mean/std per metric.

    Uses the population standard deviation (divide by N) so reported
    numbers are reproducible bit-for-bit from the raw per-run values.
    """
    run_scores = list(run_scores)
    if not run_scores:
        raise ValueError("need at least one run to aggregate")
    means = {}
    stds = {}
    for name in METRIC_NAMES:
        vals = np.array([scores[name] for scores in run_scores], dtype=float)
        means[name] = float(vals.mean())
        stds[name] = float(vals.std(ddof=0))
    return MetricsReport(means=means, stds=stds, runs=len(run_scores))
