"""Decision-maker oracle tests.

Golden-value fixtures use equal weights where psi is just the largest
objective; the noisy-judgment checks pin the flip frequency to its analytic
value with Monte-Carlo bands.
"""

import math

import numpy as np
import pytest

from iemo.dm import (
    DMOracle,
    DecisionMaker,
    Judgment,
    biased_weight,
    enumerate_queries,
    select_candidates,
)
from iemo.evo import Solution
from iemo.ranknet import RankNet


def _sols(F):
    return [Solution(x=np.zeros(1), f=np.asarray(f, dtype=float)) for f in F]


class TestGoldenValue:
    def test_equal_weight_fixtures(self):
        dm = DMOracle(w_star=np.ones(3))
        assert dm.golden_value(np.array([0.167, 0.167, 0.167])) == 0.167
        assert dm.golden_value(np.array([0.4, 0.05, 0.05])) == 0.4

    def test_weighted_fixture(self):
        dm = DMOracle(w_star=np.array([2.0, 1.0, 1.0]))
        assert dm.golden_value(np.array([0.4, 0.1, 0.1])) == 0.2

    def test_reference_shift(self):
        dm = DMOracle(w_star=np.ones(2), z_star=np.array([1.0, 1.0]))
        assert dm.golden_value(np.array([1.0, 1.5])) == 0.5

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m = rng.integers(2, 6)
            dm = DMOracle(w_star=rng.uniform(0.1, 3.0, m),
                          z_star=rng.normal(size=m))
            f = rng.normal(size=m)
            t = rng.uniform(0.1, 5.0)
            scaled = dm.z_star + t * (f - dm.z_star)
            assert math.isclose(dm.golden_value(scaled),
                                t * dm.golden_value(f), rel_tol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            DMOracle(w_star=np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            DMOracle(w_star=np.array([1.0, -1.0]))
        with pytest.raises(ValueError):
            DMOracle(w_star=np.ones(2), z_star=np.zeros(3))
        with pytest.raises(ValueError):
            DMOracle(w_star=np.ones(2), kappa=0.0)
        dm = DMOracle(w_star=np.ones(3))
        with pytest.raises(ValueError):
            dm.golden_value(np.zeros(2))


class TestCompare:
    def test_working_pair(self):
        dm = DMOracle(w_star=np.ones(3))
        j = dm.compare(np.array([0.167, 0.167, 0.167]), np.array([0.2, 0.15, 0.15]))
        assert j == Judgment(1)

    def test_antisymmetry_noiseless(self):
        rng = np.random.default_rng(1)
        dm = DMOracle(w_star=np.array([1.0, 2.0, 0.5]))
        for _ in range(100):
            fi, fj = rng.uniform(0, 1, (2, 3))
            assert dm.compare(fi, fj).c == -dm.compare(fj, fi).c

    def test_transitivity_noiseless(self):
        rng = np.random.default_rng(2)
        dm = DMOracle(w_star=np.array([0.7, 1.3]))
        for _ in range(200):
            a, b, c = rng.uniform(0, 1, (3, 2))
            if dm.compare(a, b).c == 1 and dm.compare(b, c).c == 1:
                assert dm.compare(a, c).c == 1

    def test_tie_never_flipped(self):
        dm = DMOracle(w_star=np.ones(2), kappa=0.001, seed=0)
        f = np.array([0.3, 0.1])
        for _ in range(50):
            assert dm.compare(f, f.copy()) == Judgment(0, flipped=False)
        # a sub-tolerance gap counts as a tie too
        g = f.copy()
        g[0] += 5e-13
        assert dm.compare(f, g).c == 0

    def test_noiseless_never_flips(self):
        rng = np.random.default_rng(3)
        dm = DMOracle(w_star=np.ones(2))
        assert all(not dm.compare(*rng.uniform(0, 1, (2, 2))).flipped
                   for _ in range(100))
        inf_dm = DMOracle(w_star=np.ones(2), kappa=math.inf)
        assert inf_dm.kappa is None

    def test_flip_frequency_sharp(self):
        # kappa=30, delta=0.05: flip probability exp(-1.5)
        dm = DMOracle(w_star=np.ones(2), kappa=30.0, seed=7)
        fi = np.array([0.10, 0.10])
        fj = np.array([0.15, 0.10])
        n = 50000
        flips = sum(dm.compare(fi, fj).flipped for _ in range(n))
        p = math.exp(-1.5)
        sigma = math.sqrt(n * p * (1 - p))
        assert abs(flips - n * p) <= 3 * sigma

    def test_flip_frequency_rare(self):
        # kappa=200, delta=0.05: flip probability exp(-10)
        dm = DMOracle(w_star=np.ones(2), kappa=200.0, seed=11)
        fi = np.array([0.10, 0.10])
        fj = np.array([0.15, 0.10])
        n = 200000
        results = [dm.compare(fi, fj) for _ in range(n)]
        flips = sum(j.flipped for j in results)
        p = math.exp(-10.0)
        assert abs(flips - n * p) <= 3 * math.sqrt(n * p * (1 - p))
        # a flipped verdict reverses the sign
        assert {j.c for j in results if j.flipped} <= {-1}
        assert {j.c for j in results if not j.flipped} == {1}

    def test_deterministic_per_seed(self):
        fi = np.array([0.3, 0.1])
        fj = np.array([0.32, 0.1])
        runs = []
        for _ in range(2):
            dm = DMOracle(w_star=np.ones(2), kappa=5.0, seed=42)
            runs.append([dm.compare(fi, fj).c for _ in range(500)])
        assert runs[0] == runs[1]

    def test_oracle_satisfies_dm_protocol(self):
        dm = DMOracle(w_star=np.ones(2))
        assert isinstance(dm, DecisionMaker)
        assert dm.answer(np.array([0.1, 0.1]), np.array([0.2, 0.1])) == Judgment(1)


class TestJudgment:
    def test_outcome_validated(self):
        with pytest.raises(ValueError):
            Judgment(2)


def test_biased_weight():
    assert np.array_equal(biased_weight(4, 2), np.array([1.0, 1.0, 5.0, 1.0]))
    with pytest.raises(ValueError):
        biased_weight(3, 3)


def _front_2d(n):
    t = np.linspace(0.0, 1.0, n)
    return np.column_stack([t, 1.0 - np.sqrt(t)])


def _bootstrap_recompute(F, mu):
    # the documented rule, recomputed the slow way: min-max normalize, start
    # at the lowest normalized sum, then always add the point whose nearest
    # chosen point is farthest (strict > keeps the lowest index on ties)
    lo, hi = F.min(axis=0), F.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    Z = (F - lo) / span
    sums = Z.sum(axis=1)
    chosen = [int(np.flatnonzero(sums == sums.min())[0])]
    while len(chosen) < mu:
        best, best_d = None, -1.0
        for i in range(len(Z)):
            if i in chosen:
                continue
            d = min(float(np.linalg.norm(Z[i] - Z[c])) for c in chosen)
            if d > best_d:
                best, best_d = i, d
        chosen.append(best)
    return chosen


class TestSelectCandidates:
    def test_all_distinct_small_population(self):
        pop = _sols(_front_2d(5))
        assert select_candidates(pop, None, 5) == pop
        assert select_candidates(pop, None, 9) == pop

    def test_model_route_takes_top_utilities(self):
        model = RankNet(input_dim=1, hidden_dim=0, params=np.array([-1.0]))
        pop = _sols([[5.0], [4.0], [3.0], [2.0], [1.0]])
        # utility = -f, so the two smallest objective values win
        assert select_candidates(pop, model, 2) == [pop[4], pop[3]]

    def test_duplicates_removed_before_ranking(self):
        model = RankNet(input_dim=1, hidden_dim=0, params=np.array([1.0]))
        pop = _sols([[3.0], [3.0], [2.0], [1.0]])
        out = select_candidates(pop, model, 2)
        assert out == [pop[0], pop[2]]

    def test_bootstrap_matches_recomputation(self):
        F = _front_2d(20)
        got = select_candidates(_sols(F), None, 10)
        want = _bootstrap_recompute(F, 10)
        assert np.array_equal(np.stack([s.f for s in got]), F[want])

    def test_bootstrap_ignores_dominated_points(self):
        F = _front_2d(20)
        dominated = F + 0.3
        pop = _sols(np.vstack([F, dominated]))
        got = select_candidates(pop, None, 10)
        front_rows = {tuple(r) for r in F}
        assert all(tuple(s.f) in front_rows for s in got)

    def test_bootstrap_takes_whole_fronts_first(self):
        first = _front_2d(4)
        second = _front_2d(8) + 0.25
        pop = _sols(np.vstack([first, second]))
        got = select_candidates(pop, None, 6)
        rows = [tuple(s.f) for s in got]
        assert set(tuple(r) for r in first) <= set(rows)
        assert len(rows) == 6

    def test_mu_one_bootstrap(self):
        pop = _sols(_front_2d(7))
        got = select_candidates(pop, None, 1)
        # lowest normalized sum on this front is the right end (t = 1)
        Z = _front_2d(7)
        lo, hi = Z.min(axis=0), Z.max(axis=0)
        sums = ((Z - lo) / (hi - lo)).sum(axis=1)
        assert np.array_equal(got[0].f, Z[int(np.argmin(sums))])


class TestEnumerateQueries:
    def test_counts(self):
        assert len(enumerate_queries(range(10))) == 45
        assert enumerate_queries(range(2)) == [(0, 1)]

    def test_canonical_unique(self):
        pairs = enumerate_queries(range(7))
        assert all(i < j for i, j in pairs)
        assert len(set(pairs)) == len(pairs) == 21

    def test_too_few(self):
        with pytest.raises(ValueError):
            enumerate_queries([object()])
