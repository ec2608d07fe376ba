"""Statistics toolkit tests: every nontrivial value is checked against an
independent oracle (full sign enumeration for Wilcoxon, double loops for A12
and the approximation error, hand-evaluated DCG sums for NDCG)."""

import itertools
import math

import numpy as np
import pytest

from iemo.evo import Solution
from iemo.stats import (
    MetricSample,
    ScottKnottCluster,
    _rank_sum_test,
    a12,
    approx_error,
    ndcg_at_k,
    scott_knott,
    sign_test,
    wilcoxon_signed_rank,
)


def _pop(F):
    return [Solution(x=np.zeros(1), f=np.asarray(f, dtype=float)) for f in F]


class TestApproxError:
    def test_member_at_golden_point(self):
        pop = _pop([[0.5, 0.5], [0.1, 0.9]])
        assert approx_error(pop, np.array([0.1, 0.9])) == 0.0

    def test_single_member_fixture(self):
        got = approx_error(_pop([[0.3, 0.3, 0.3]]), np.full(3, 0.167))
        assert got == pytest.approx(0.2304, abs=1e-4)
        assert got == pytest.approx(math.sqrt(3) * 0.133, rel=1e-12)

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            F = rng.uniform(0, 2, (rng.integers(1, 30), 4))
            z = rng.uniform(0, 2, 4)
            want = min(float(np.sqrt(np.sum((row - z) ** 2))) for row in F)
            assert approx_error(_pop(F), z) == want

    def test_empty_population(self):
        with pytest.raises(ValueError):
            approx_error([], np.zeros(2))


class TestNdcg:
    def test_perfect_ranking(self):
        rel = np.array([3.0, 2.0, 1.0, 0.0])
        assert ndcg_at_k([0, 1, 2, 3], rel, 4) == 1.0

    def test_reversed_three_item_fixture(self):
        # DCG = 0 + 1/log2(3) + 3/2; IDCG = 3 + 1/log2(3)
        rel = np.array([2.0, 1.0, 0.0])
        got = ndcg_at_k([2, 1, 0], rel, 3)
        want = (1.0 / math.log2(3) + 1.5) / (3.0 + 1.0 / math.log2(3))
        assert got == pytest.approx(0.5869, abs=1e-4)
        assert got == pytest.approx(want, rel=1e-12)

    def test_equal_relevance_swap_is_free(self):
        rel = np.array([2.0, 1.0, 1.0, 0.0])
        assert ndcg_at_k([0, 1, 2, 3], rel, 4) == ndcg_at_k([0, 2, 1, 3], rel, 4)

    def test_all_zero_relevance(self):
        assert ndcg_at_k([1, 0, 2], np.zeros(3), 3) == 1.0

    def test_k_validation(self):
        with pytest.raises(ValueError):
            ndcg_at_k([0, 1], np.ones(2), 3)
        with pytest.raises(ValueError):
            ndcg_at_k([0, 1], np.ones(2), 0)

    def test_range_and_perfection_property(self):
        # NDCG in [0,1], and == 1 exactly when the top-k grade sequence
        # matches the ideal one
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(2, 12))
            rel = rng.integers(0, 4, n).astype(float)
            if np.all(rel == 0):
                continue
            order = rng.permutation(n)
            k = int(rng.integers(1, n + 1))
            got = ndcg_at_k(order, rel, k)
            assert 0.0 <= got <= 1.0 + 1e-12
            ideal = np.sort(rel)[::-1][:k]
            assert (got == pytest.approx(1.0, abs=1e-12)) == \
                bool(np.array_equal(rel[order[:k]], ideal))


def _midranks_slow(v):
    return np.array([1 + np.sum(v < x) + (np.sum(v == x) - 1) / 2.0 for x in v])


def _wilcoxon_enum(a, b):
    d = (a - b)[a != b]
    ranks = _midranks_slow(np.abs(d))
    w_plus = ranks[d > 0].sum()
    n = len(d)
    le = ge = 0
    for mask in itertools.product([0, 1], repeat=n):
        w = float(np.dot(mask, ranks))
        if w <= w_plus + 1e-9:
            le += 1
        if w >= w_plus - 1e-9:
            ge += 1
    return min(1.0, 2.0 * min(le, ge) / 2.0 ** n)


class TestWilcoxon:
    def test_identical_samples(self):
        x = np.arange(8.0)
        assert wilcoxon_signed_rank(x, x) == 1.0

    def test_six_positive_differences(self):
        a = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        b = a - np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
        assert wilcoxon_signed_rank(a, b) == pytest.approx(2.0 / 64.0, rel=1e-12)

    def test_exact_branch_matches_enumeration(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            n = int(rng.integers(5, 11))
            # quarter-grid values force tied absolute differences
            a = np.round(rng.uniform(0, 2, n) * 4) / 4
            b = np.round(rng.uniform(0, 2, n) * 4) / 4
            if np.count_nonzero(a != b) < 5:
                continue
            assert wilcoxon_signed_rank(a, b) == \
                pytest.approx(_wilcoxon_enum(a, b), rel=1e-12)

    def test_too_few_nonzero_differences(self):
        a = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        b = np.array([1.0, 2.0, 3.0, 4.0, 5.5])
        with pytest.raises(ValueError):
            wilcoxon_signed_rank(a, b)

    def test_normal_branch_detects_shift(self):
        rng = np.random.default_rng(3)
        base = rng.normal(0, 1, 31)
        assert wilcoxon_signed_rank(base + 2.0, base) < 1e-4
        noise = rng.normal(0, 1e-3, 31)
        assert wilcoxon_signed_rank(base + noise, base) > 0.05

    def test_normal_branch_with_heavy_ties(self):
        a = np.array([0.0, 1.0] * 10 + [2.0] * 11)
        b = np.array([1.0, 0.0] * 10 + [0.5] * 11)
        p = wilcoxon_signed_rank(a, b)
        assert 0.0 < p <= 1.0


class TestA12:
    def test_identical(self):
        x = np.arange(10.0)
        assert a12(x, x) == (0.5, "negligible")

    def test_disjoint(self):
        res = a12(np.zeros(5), np.ones(5))
        assert res.value == 1.0
        assert res.magnitude == "large"

    def test_double_loop_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            x = np.round(rng.uniform(0, 1, rng.integers(3, 20)), 1)
            y = np.round(rng.uniform(0, 1, rng.integers(3, 20)), 1)
            wins = sum((1.0 if xi < yj else 0.5 if xi == yj else 0.0)
                       for xi in x for yj in y)
            assert a12(x, y).value == pytest.approx(wins / (len(x) * len(y)), rel=1e-12)

    def test_complementarity_and_monotone_invariance(self):
        rng = np.random.default_rng(5)
        x = rng.normal(0, 1, 15)
        y = rng.normal(0.5, 1, 12)
        assert a12(x, y).value + a12(y, x).value == pytest.approx(1.0, rel=1e-12)
        assert a12(np.exp(x), np.exp(y)).value == a12(x, y).value

    def test_magnitude_thresholds(self):
        def with_value(k, n=100):
            # k of the a-values beat all of b, the rest lose: A12 = k/n
            return a12(np.r_[np.zeros(k), 2 * np.ones(n - k)], np.ones(n))

        assert with_value(55).magnitude == "negligible"
        assert with_value(56).magnitude == "small"
        assert with_value(63).magnitude == "small"
        assert with_value(64).magnitude == "medium"
        assert with_value(70).magnitude == "medium"
        assert with_value(71).magnitude == "large"


class TestRankSum:
    def test_identical_pools(self):
        x = np.arange(10.0)
        assert _rank_sum_test(x, x.copy()) == pytest.approx(1.0)

    def test_separated_pools(self):
        assert _rank_sum_test(np.arange(5.0), np.arange(10.0, 15.0)) < 0.05


class TestScottKnott:
    def test_single_constant_cluster(self):
        samples = [MetricSample(np.full(31, 3.0), lab) for lab in "abc"]
        got = scott_knott(samples)
        assert got == [ScottKnottCluster(rank=1, labels=["a", "b", "c"])]

    def test_two_separated_groups(self):
        rng = np.random.default_rng(6)
        lo = MetricSample(rng.normal(0, 1, 31), "lo")
        hi = MetricSample(rng.normal(100, 1, 31), "hi")
        got = scott_knott([hi, lo])
        assert got == [ScottKnottCluster(rank=1, labels=["lo"]),
                       ScottKnottCluster(rank=2, labels=["hi"])]

    def test_three_tiers_with_shared_rank(self):
        rng = np.random.default_rng(7)
        base = rng.normal(0.0, 0.5, 31)
        a = MetricSample(base, "a")
        b = MetricSample(rng.permutation(base), "b")
        c = MetricSample(rng.normal(10.0, 0.5, 31), "c")
        got = scott_knott([c, a, b])
        assert got[0].labels == ["a", "b"]
        assert got[1] == ScottKnottCluster(rank=2, labels=["c"])

    def test_rank_invariants_fuzz(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            k = int(rng.integers(1, 6))
            samples = [MetricSample(rng.normal(rng.uniform(0, 3), 0.5, 31), f"g{i}")
                       for i in range(k)]
            clusters = scott_knott(samples)
            assert [c.rank for c in clusters] == list(range(1, len(clusters) + 1))
            got_labels = [lab for c in clusters for lab in c.labels]
            assert sorted(got_labels) == sorted(s.label for s in samples)
            by_label = {s.label: s.values.mean() for s in samples}
            cluster_means = [np.mean([by_label[lab] for lab in c.labels])
                             for c in clusters]
            assert cluster_means == sorted(cluster_means)

    def test_empty_input(self):
        with pytest.raises(ValueError):
            scott_knott([])


class TestSignTest:
    def test_exact_tail_values(self):
        assert sign_test(9, 11) == pytest.approx(67.0 / 2048.0, rel=1e-15)
        assert sign_test(8, 11) == pytest.approx(232.0 / 2048.0, rel=1e-15)
        assert sign_test(11, 11) == pytest.approx(1.0 / 2048.0, rel=1e-15)
        assert sign_test(0, 11) == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            sign_test(5, 4)


class TestMetricSample:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            MetricSample(np.array([]), "x")
        with pytest.raises(ValueError):
            MetricSample(np.array([1.0, np.nan]), "x")
