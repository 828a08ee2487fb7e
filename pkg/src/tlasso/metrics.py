"""Scalar evaluation metrics shared by CV and the experiment harness."""

import numpy as np

from .errors import DegenerateLabelsError


def _average_ranks(values):
    """1-based ranks with ties assigned their group's average rank."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="mergesort")
    sorted_vals = values[order]
    ranks = np.empty(values.shape[0])
    i = 0
    while i < values.shape[0]:
        j = i
        while j + 1 < values.shape[0] and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auc(scores, labels):
    """Probability a random positive outscores a random negative, ties 1/2.

    Mann-Whitney form: U / (n_pos * n_neg) with average ranks.
    """
    scores = np.ravel(np.asarray(scores, dtype=np.float64))
    labels = np.ravel(np.asarray(labels))
    if scores.shape != labels.shape:
        raise DegenerateLabelsError("scores and labels must have equal length")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabelsError(f"need both classes, got {n_pos} positives / {n_neg} negatives")
    ranks = _average_ranks(scores)
    u = ranks[pos].sum() - 0.5 * n_pos * (n_pos + 1)
    return float(u / (n_pos * n_neg))
