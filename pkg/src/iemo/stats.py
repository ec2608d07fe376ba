"""Run-quality metrics and the statistical comparison toolkit.

Covers the approximation error of a population against the decision maker's
golden point, NDCG for learned rankings, the Wilcoxon signed-rank test (exact
for small samples), the Vargha-Delaney A12 effect size, and a Scott-Knott
clustering whose split acceptance uses a rank test plus a non-negligible
effect size instead of the classical likelihood criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class MetricSample:
    """Per-run metric values for one algorithm/configuration."""

    values: np.ndarray
    label: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("metric sample must be a nonempty 1-D collection")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"metric sample {self.label!r} has non-finite values")
        object.__setattr__(self, "values", v)


class A12Result(NamedTuple):
    value: float
    magnitude: str


@dataclass(frozen=True)
class ScottKnottCluster:
    rank: int
    labels: list[str] = field(default_factory=list)


def approx_error(pop, golden_f) -> float:
    """Minimum Euclidean distance from the population image to the golden point."""
    members = list(pop)
    if not members:
        raise ValueError("population is empty")
    F = np.stack([s.f for s in members])
    z = np.asarray(golden_f, dtype=float)
    return float(np.min(np.linalg.norm(F - z[None, :], axis=1)))


def ndcg_at_k(predicted_order, relevance, k: int) -> float:
    """Normalized discounted cumulative gain of a predicted ranking.

    `predicted_order` lists item indices best-first; `relevance` holds the
    graded truth per item.  Gain is 2^rel - 1 with the usual log2 discount.
    An all-zero relevance vector has no ranking content and scores 1.0.
    """
    rel = np.asarray(relevance, dtype=float)
    order = np.asarray(predicted_order, dtype=int)
    if len(order) != len(rel):
        raise ValueError("predicted order and relevance lengths differ")
    if not 1 <= k <= len(order):
        raise ValueError(f"k must be in [1, {len(order)}]")
    discount = 1.0 / np.log2(np.arange(2, k + 2))
    dcg = float(np.sum((2.0 ** rel[order[:k]] - 1.0) * discount))
    ideal = np.sort(rel)[::-1][:k]
    idcg = float(np.sum((2.0 ** ideal - 1.0) * discount))
    if idcg == 0.0:
        return 1.0
    return dcg / idcg


def _midranks(v: np.ndarray) -> np.ndarray:
    order = np.argsort(v, kind="stable")
    sv = v[order]
    ranks = np.empty(len(v))
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_signed_rank(a, b) -> float:
    """Two-sided Wilcoxon signed-rank p-value for paired samples.

    Zero differences are dropped.  Up to 12 effective pairs the null
    distribution of W+ is enumerated exactly (over doubled midranks, so ties
    are handled); beyond that a normal approximation with tie-corrected
    variance is used, without continuity correction.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("paired samples must have equal length")
    d = a - b
    d = d[d != 0.0]
    n = len(d)
    if n == 0:
        return 1.0
    if n < 5:
        raise ValueError("need at least 5 nonzero differences")
    absd = np.abs(d)
    ranks = _midranks(absd)
    w_plus = float(ranks[d > 0].sum())

    if n <= 12:
        r2 = np.rint(2.0 * ranks).astype(int)
        total = int(r2.sum())
        # signed-rank null: each pair contributes its rank to W+ with prob 1/2
        dist = np.zeros(total + 1)
        dist[0] = 1.0
        for r in r2:
            shifted = np.zeros_like(dist)
            shifted[r:] = dist[:total + 1 - r]
            dist = dist + shifted
        w2 = int(round(2.0 * w_plus))
        denom = 2.0 ** n
        p_le = dist[:w2 + 1].sum() / denom
        p_ge = dist[w2:].sum() / denom
        return min(1.0, 2.0 * min(p_le, p_ge))

    mean = n * (n + 1) / 4.0
    _, counts = np.unique(absd, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(counts**3 - counts)) / 48.0
    if var <= 0.0:
        return 1.0
    z = (w_plus - mean) / math.sqrt(var)
    return math.erfc(abs(z) / math.sqrt(2.0))


def _a12_magnitude(value: float) -> str:
    # boundaries are inclusive upward; the epsilon keeps decimal thresholds
    # like 0.71 from landing one ulp below 0.5 + 0.21
    dev = abs(value - 0.5)
    if dev >= 0.21 - 1e-9:
        return "large"
    if dev >= 0.14 - 1e-9:
        return "medium"
    if dev >= 0.06 - 1e-9:
        return "small"
    return "negligible"


def a12(a, b) -> A12Result:
    """Vargha-Delaney effect size: probability a beats b under minimization."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("effect size needs nonempty samples")
    less = np.count_nonzero(a[:, None] < b[None, :])
    equal = np.count_nonzero(a[:, None] == b[None, :])
    value = (less + 0.5 * equal) / (len(a) * len(b))
    return A12Result(float(value), _a12_magnitude(float(value)))


def _rank_sum_test(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sided Wilcoxon rank-sum p (normal approximation, tie-corrected)."""
    n1, n2 = len(x), len(y)
    pooled = np.concatenate([x, y])
    ranks = _midranks(pooled)
    u = float(ranks[:n1].sum()) - n1 * (n1 + 1) / 2.0
    mean = n1 * n2 / 2.0
    n = n1 + n2
    _, counts = np.unique(pooled, return_counts=True)
    tie = float(np.sum(counts**3 - counts)) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie)
    if var <= 0.0:
        return 1.0
    z = (u - mean) / math.sqrt(var)
    return math.erfc(abs(z) / math.sqrt(2.0))


def scott_knott(samples: list[MetricSample], alpha: float = 0.05) -> list[ScottKnottCluster]:
    """Cluster metric samples into ranked groups (rank 1 = smallest mean).

    Groups are ordered by mean, then recursively bisected at the split
    maximizing the between-cluster sum of squares of group means; a split is
    kept only when the pooled halves differ by a rank test at `alpha` with a
    non-negligible A12.
    """
    if not samples:
        raise ValueError("no samples to cluster")
    means = np.array([s.values.mean() for s in samples])
    order = np.argsort(means, kind="stable")
    out: list[list[int]] = []

    def _split(idx: list[int]) -> None:
        if len(idx) == 1:
            out.append(idx)
            return
        ms = means[idx]
        overall = ms.mean()
        best_k, best_b = 1, -1.0
        for k in range(1, len(idx)):
            b = k * (ms[:k].mean() - overall) ** 2 \
                + (len(idx) - k) * (ms[k:].mean() - overall) ** 2
            if b > best_b:
                best_k, best_b = k, b
        left, right = idx[:best_k], idx[best_k:]
        pl = np.concatenate([samples[i].values for i in left])
        pr = np.concatenate([samples[i].values for i in right])
        if _rank_sum_test(pl, pr) < alpha and a12(pl, pr).magnitude != "negligible":
            _split(left)
            _split(right)
        else:
            out.append(idx)

    _split([int(i) for i in order])
    return [ScottKnottCluster(rank=r, labels=[samples[i].label for i in idx])
            for r, idx in enumerate(out, start=1)]


def sign_test(successes: int, trials: int) -> float:
    """One-sided sign test: P(X >= successes) for X ~ Binomial(trials, 1/2)."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError("invalid sign-test counts")
    tail = sum(math.comb(trials, k) for k in range(successes, trials + 1))
    return tail / 2.0 ** trials
