"""Average ranks, Friedman test, Wilcoxon signed-rank test and Holm adjustment."""
from __future__ import annotations

import numpy as np
from scipy.stats import chi2, norm, rankdata

EXACT_MAX_N = 20


def rank_rows(table, higher_is_better: bool = False) -> np.ndarray:
    """Rank methods (columns) within each dataset (row); 1 is best, ties averaged."""
    t = np.asarray(table, dtype=float)
    return rankdata(-t if higher_is_better else t, axis=1, method="average")


def average_ranks(table, higher_is_better: bool = False) -> np.ndarray:
    return rank_rows(table, higher_is_better).mean(axis=0)


def friedman_test(table) -> tuple[float, float]:
    """Chi-square statistic with tie correction and its p-value (k-1 degrees of freedom)."""
    t = np.asarray(table, dtype=float)
    n, k = t.shape
    if n < 2 or k < 2:
        raise ValueError("Friedman test needs at least 2 datasets and 2 methods")
    ranks = rank_rows(t)
    rbar = ranks.mean(axis=0)
    stat = 12.0 * n / (k * (k + 1)) * np.sum((rbar - (k + 1) / 2.0) ** 2)
    ties = 0.0
    for row in t:
        _, counts = np.unique(row, return_counts=True)
        ties += np.sum(counts ** 3 - counts)
    correction = 1.0 - ties / (n * k * (k * k - 1))
    if correction <= 0:
        return 0.0, 1.0
    stat /= correction
    return float(stat), float(chi2.sf(stat, k - 1))


def _signed_ranks(a, b) -> tuple[np.ndarray, np.ndarray]:
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diff.ndim != 1:
        raise ValueError("expected 1-D samples of equal length")
    diff = diff[diff != 0]
    return rankdata(np.abs(diff)), diff > 0


def exact_wplus_distribution(ranks) -> tuple[np.ndarray, int]:
    """Counts of every attainable doubled W+ over all 2^n sign assignments."""
    doubled = np.rint(2 * np.asarray(ranks)).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=object)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    return counts, 2 ** len(doubled)


def wilcoxon_signed_rank(a, b, min_n: int = 5) -> tuple[float, float]:
    """Two-sided test; returns (W, p) with W = min(W+, W-).

    Exact null distribution for up to 20 non-zero differences, otherwise the
    normal approximation with continuity and tie corrections.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("samples differ in length")
    ranks, positive = _signed_ranks(a, b)
    n = ranks.size
    if n == 0:
        return 0.0, 1.0
    if n < min_n:
        raise ValueError(f"only {n} non-zero difference(s); at least {min_n} required")
    w_plus = float(ranks[positive].sum())
    w = min(w_plus, n * (n + 1) / 2.0 - w_plus)
    if n <= EXACT_MAX_N:
        counts, total = exact_wplus_distribution(ranks)
        t = int(round(2 * w))
        lower = sum(counts[: t + 1])
        p = min(1.0, 2.0 * float(lower) / total)
        return w, p
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_counts ** 3 - tie_counts) / 48.0
    z = max(abs(w_plus - mean) - 0.5, 0.0) / np.sqrt(var)
    return w, float(min(1.0, 2.0 * norm.sf(z)))


def holm(pvalues) -> np.ndarray:
    """Holm step-down adjusted p-values (NaN entries are left untouched)."""
    p = np.asarray(pvalues, dtype=float)
    out = np.full_like(p, np.nan)
    valid = np.flatnonzero(~np.isnan(p))
    m = valid.size
    order = valid[np.argsort(p[valid], kind="stable")]
    running = 0.0
    for i, idx in enumerate(order):
        running = max(running, min(1.0, (m - i) * p[idx]))
        out[idx] = running
    return out
