"""Rank correlation and the cross-validation harness.

Kendall's tau-b is implemented with a merge-sort inversion count
(O(n log n)); the test suite checks it against exhaustive O(n^2) pair
enumeration. The tie-corrected variant is used throughout because
5-point ordinal scores guarantee heavy ties.
"""

import json
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, TooFewSamples


@dataclass(frozen=True)
class PairedScores:
    """Two aligned score sequences, e.g. predictions vs human judgments."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise DimensionMismatch(f"|x|={len(self.x)} != |y|={len(self.y)}")
        if len(self.x) < 2:
            raise DimensionMismatch("need at least 2 paired scores")
        if not (np.isfinite(self.x).all() and np.isfinite(self.y).all()):
            raise DimensionMismatch("scores must be finite")


def _merge_count(values: list[float]) -> int:
    """Count strict inversions (i < j with values[i] > values[j]) by merge sort."""
    n = len(values)
    if n < 2:
        return 0
    mid = n // 2
    left, right = values[:mid], values[mid:]
    inversions = _merge_count(left) + _merge_count(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            # right[j] jumps ahead of every remaining left element
            inversions += len(left) - i
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    values[:] = merged
    return inversions


def _tie_pairs(sorted_values: np.ndarray) -> int:
    pairs = 0
    run = 1
    for i in range(1, len(sorted_values)):
        if sorted_values[i] == sorted_values[i - 1]:
            run += 1
        else:
            pairs += run * (run - 1) // 2
            run = 1
    pairs += run * (run - 1) // 2
    return pairs


def _joint_tie_pairs(xs: np.ndarray, ys: np.ndarray) -> int:
    pairs = 0
    run = 1
    for i in range(1, len(xs)):
        if xs[i] == xs[i - 1] and ys[i] == ys[i - 1]:
            run += 1
        else:
            pairs += run * (run - 1) // 2
            run = 1
    pairs += run * (run - 1) // 2
    return pairs


def tau_b(x, y) -> float:
    """Kendall's tau-b between two equal-length sequences.

    tau_b = (C - D) / sqrt((n0 - n1) (n0 - n2)) with n0 = n(n-1)/2 and
    n1, n2 the within-sequence tie-pair counts. Raises DegenerateInput
    when either sequence is fully tied (the statistic is undefined).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("x and y must be 1-d and equal length")
    n = len(x)
    if n < 2:
        raise DimensionMismatch("need at least 2 pairs")

    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]

    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(xs)
    n2 = _tie_pairs(np.sort(y))
    n3 = _joint_tie_pairs(xs, ys)
    if n0 == n1 or n0 == n2:
        raise DegenerateInput("tau-b undefined: a sequence is fully tied")

    # After sorting by (x, y), strict inversions in y are exactly the
    # discordant pairs: equal-x groups are y-sorted and contribute none.
    discordant = _merge_count(list(ys))
    concordant = n0 - n1 - n2 + n3 - discordant
    return (concordant - discordant) / sqrt((n0 - n1) * (n0 - n2))


def kendall_tau_b(p: PairedScores) -> float:
    """Kendall's tau-b of a PairedScores bundle."""
    return tau_b(p.x, p.y)


@dataclass
class CVReport:
    """Per-fold and mean tau-b for one model kind."""

    model: str
    k: int
    seed: int
    per_fold: list[float | None] = field(default_factory=list)
    mean_tau: float = float("nan")
    degenerate_folds: int = 0

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "k": self.k,
            "seed": self.seed,
            "per_fold": self.per_fold,
            "mean_tau": self.mean_tau,
            "degenerate_folds": self.degenerate_folds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def fold_indices(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffle then contiguous partition into k folds (sizes differ by <= 1)."""
    if k < 2:
        raise TooFewSamples("k must be at least 2")
    if n < k:
        raise TooFewSamples(f"{n} samples cannot form {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    if min(len(f) for f in folds) < 2:
        raise TooFewSamples("every fold needs at least 2 samples to compute tau")
    return folds


def cross_validate(
    X,
    y,
    model_kind: str,
    k: int = 10,
    seed: int = 0,
    model_config: dict | None = None,
) -> CVReport:
    """K-fold cross-validation of an estimator kind, scored by tau-b per fold.

    Folds where tau-b is undefined (fully tied predictions or targets)
    are recorded as null and excluded from the mean.
    """
    from . import models  # local import to avoid a cycle at module load

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise DimensionMismatch("X must be 2-d with one row per target")
    folds = fold_indices(len(y), k, seed)

    report = CVReport(model=model_kind, k=k, seed=seed)
    taus = []
    for fold in folds:
        mask = np.ones(len(y), dtype=bool)
        mask[fold] = False
        model = models.fit(model_kind, X[mask], y[mask], config=model_config)
        preds = models.predict_matrix(model, X[fold])
        try:
            t = tau_b(preds, y[fold])
            report.per_fold.append(t)
            taus.append(t)
        except DegenerateInput:
            report.per_fold.append(None)
            report.degenerate_folds += 1
    if not taus:
        raise DegenerateInput("tau-b undefined on every fold")
    report.mean_tau = float(np.mean(taus))
    return report
