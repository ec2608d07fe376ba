"""Weight generation and adjustment tests.

The attraction fixtures are worked by hand: with a single promising vector
(0, 1) and eta = 0.2 the four uniform two-objective weights must land exactly
on {(0.8, 0.2), (8/15, 7/15), (4/15, 11/15), (0, 1)}.
"""

import math

import numpy as np
import pytest

from iemo.evo import Solution
from iemo.ranknet import RankNet
from iemo.weights import (
    ElicitationError,
    adjust_weights,
    das_dennis,
    har_sample,
    load_weights_csv,
    save_weights_csv,
    utility_truncation_order,
)


def _linear_model(dim=1):
    # identity normalization: utility is just the (first) objective value
    return RankNet(input_dim=dim, hidden_dim=0, params=np.ones(dim))


def _pop(values):
    return [Solution(x=np.zeros(1), f=np.array([v], dtype=float)) for v in values]


class TestDasDennis:
    def test_m3_h12_is_the_usual_lattice(self):
        W = das_dennis(3, 12)
        assert W.shape == (math.comb(12 + 2, 2), 3)
        assert np.allclose(W.sum(axis=1), 1.0, atol=1e-12)
        # every entry is a multiple of 1/12
        assert np.allclose(np.round(W * 12) / 12, W, atol=1e-12)
        assert len({tuple(r) for r in np.round(W * 12).astype(int)}) == len(W)

    def test_m2_h4_full_enumeration(self):
        W = das_dennis(2, 4)
        expected = np.array(
            [[0.0, 1.0], [0.25, 0.75], [0.5, 0.5], [0.75, 0.25], [1.0, 0.0]])
        assert np.array_equal(W, expected)

    def test_permutation_invariance(self):
        W = das_dennis(3, 5)
        orig = {tuple(r) for r in np.round(W * 5).astype(int)}
        for perm in [(1, 0, 2), (2, 1, 0), (1, 2, 0)]:
            assert {tuple(r) for r in np.round(W[:, perm] * 5).astype(int)} == orig

    def test_h1_gives_unit_vectors(self):
        assert np.array_equal(das_dennis(4, 1), np.eye(4)[::-1])

    def test_bad_args(self):
        with pytest.raises(ElicitationError):
            das_dennis(0, 5)
        with pytest.raises(ElicitationError):
            das_dennis(3, 0)


class TestHitAndRun:
    def test_rows_sum_to_one(self):
        W = har_sample(5, 200, seed=3)
        assert W.shape == (200, 5)
        assert np.all(np.abs(W.sum(axis=1) - 1.0) <= 1e-9)
        assert np.all(W >= 0.0)

    def test_custom_bounds_respected(self):
        lo = np.array([0.2, 0.0, 0.0])
        up = np.array([1.0, 0.5, 1.0])
        W = har_sample(3, 300, lower=lo, upper=up, seed=1)
        assert np.all(W >= lo - 1e-12)
        assert np.all(W <= up + 1e-12)
        assert np.all(np.abs(W.sum(axis=1) - 1.0) <= 1e-9)

    def test_coordinate_means_near_uniform(self):
        # uniform on the 10-simplex: each coordinate has mean 1/10
        W = har_sample(10, 5000, seed=0)
        assert np.all(np.abs(W.mean(axis=0) - 0.1) <= 0.005)

    def test_m2_marginal_is_uniform(self):
        # for m = 2 the first coordinate of a uniform simplex draw is U[0, 1]
        W = har_sample(2, 5000, seed=4)
        xs = np.sort(W[:, 0])
        ecdf_hi = np.arange(1, len(xs) + 1) / len(xs)
        ks = max(np.max(np.abs(ecdf_hi - xs)),
                 np.max(np.abs(ecdf_hi - 1.0 / len(xs) - xs)))
        assert ks < 0.03

    def test_deterministic(self):
        a = har_sample(4, 50, seed=11)
        b = har_sample(4, 50, seed=11)
        c = har_sample(4, 50, seed=12)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_pinned_bounds_return_the_single_point(self):
        lo = up = np.full(4, 0.25)
        W = har_sample(4, 10, lower=lo, upper=up, seed=0)
        assert np.array_equal(W, np.tile(lo, (10, 1)))

    def test_infeasible_bounds(self):
        with pytest.raises(ElicitationError):
            har_sample(3, 5, lower=np.array([0.5, 0.5, 0.5]))
        with pytest.raises(ElicitationError):
            har_sample(3, 5, upper=np.array([0.2, 0.2, 0.2]))
        with pytest.raises(ElicitationError):
            har_sample(3, 5, lower=np.array([0.6, 0.0, 0.0]),
                       upper=np.array([0.4, 1.0, 1.0]))

    def test_single_weight(self):
        assert np.array_equal(har_sample(1, 7), np.ones((7, 1)))


class TestAdjustWeights:
    def test_single_attractor_fixture(self):
        W = np.array([[1.0, 0.0],
                      [2.0 / 3.0, 1.0 / 3.0],
                      [1.0 / 3.0, 2.0 / 3.0],
                      [0.0, 1.0]])
        # member 3 carries the highest utility, so its weight (0, 1) attracts
        pop = _pop([0.0, 1.0, 2.0, 9.0])
        out = adjust_weights(W, pop, _linear_model(), mu=1, eta_step=0.2,
                             association="index")
        expected = np.array([[0.8, 0.2],
                             [8.0 / 15.0, 7.0 / 15.0],
                             [4.0 / 15.0, 11.0 / 15.0],
                             [0.0, 1.0]])
        assert np.allclose(out, expected, atol=1e-12)
        assert np.array_equal(out[3], W[3])

    def test_two_attractors_split_the_pool(self):
        # quota = ceil((6 - 2) / 2) = 2 per attractor; the first attractor
        # consumes rows 1 and 2, so the second one must reach past them
        W = np.array([[1.0 - k / 5.0, k / 5.0] for k in range(6)])
        pop = _pop([10.0, 1.0, 2.0, 3.0, 4.0, 9.0])
        out = adjust_weights(W, pop, _linear_model(), mu=2, eta_step=0.5,
                             association="index")
        expected = np.array([[1.0, 0.0], [0.9, 0.1], [0.8, 0.2],
                             [0.2, 0.8], [0.1, 0.9], [0.0, 1.0]])
        assert np.allclose(out, expected, atol=1e-12)

    def test_eta_zero_is_bitwise_identity(self):
        W = har_sample(3, 8, seed=2)
        pop = _pop(np.arange(8.0))
        out = adjust_weights(W, pop, _linear_model(), mu=2, eta_step=0.0,
                             association="index")
        assert np.array_equal(out, W)
        assert out is not W

    def test_utilities_are_stamped(self):
        W = das_dennis(2, 3)
        pop = _pop([0.5, 2.5, 1.5, 0.0])
        adjust_weights(W, pop, _linear_model(), mu=1, eta_step=0.1,
                       association=[0, 1, 2, 3])
        assert [s.utility for s in pop] == [0.5, 2.5, 1.5, 0.0]

    def test_every_nonpromising_row_moves_toward_an_attractor(self):
        rng = np.random.default_rng(9)
        W = har_sample(3, 12, seed=5)
        pop = _pop(rng.permutation(12).astype(float))
        eta = 0.3
        out = adjust_weights(W, pop, _linear_model(), mu=3, eta_step=eta,
                             association="index")
        u = np.array([s.utility for s in pop])
        promising = list(np.argsort(-u, kind="stable")[:3])
        for i in range(12):
            if i in promising:
                assert np.array_equal(out[i], W[i])
                continue
            steps = [W[i] + eta * (W[p] - W[i]) for p in promising]
            assert any(np.allclose(out[i], s, atol=1e-12) for s in steps)

    def test_simplex_preserved_under_large_steps(self):
        W = das_dennis(3, 6)
        pop = _pop(np.arange(float(len(W))))
        out = adjust_weights(W, pop, _linear_model(), mu=4, eta_step=0.9,
                             association="index")
        assert np.all(out >= 0.0)
        assert np.allclose(out.sum(axis=1), 1.0, atol=1e-12)

    def test_tchebycheff_association_picks_aligned_weight(self):
        W = das_dennis(2, 4)
        # solution on the (0.75, 0.25) direction: that row minimizes the
        # weighted Chebyshev value and becomes the attractor
        pop = [Solution(x=np.zeros(1), f=np.array([0.25, 0.75]))]
        out = adjust_weights(W, pop, _linear_model(2), mu=1, eta_step=0.25,
                             association="tchebycheff", z=np.zeros(2))
        assert np.array_equal(out[3], W[3])
        assert np.allclose(out[0], W[0] + 0.25 * (W[3] - W[0]), atol=1e-12)

    def test_mu_clamped_with_warning(self):
        W = das_dennis(2, 3)
        pop = _pop([3.0, 1.0, 2.0])
        with pytest.warns(UserWarning, match="clamping"):
            adjust_weights(W, pop, _linear_model(), mu=9, eta_step=0.2,
                           association=[0, 1, 2])

    def test_index_association_needs_matching_sizes(self):
        W = das_dennis(2, 4)
        with pytest.raises(ElicitationError):
            adjust_weights(W, _pop([1.0, 2.0]), _linear_model(), mu=1,
                           eta_step=0.2, association="index")


class TestTruncationOrder:
    def test_descending_and_stable(self):
        pop = _pop([1.0, 3.0, 2.0, 3.0, 0.5])
        order = utility_truncation_order(pop, _linear_model())
        assert order == [1, 3, 2, 0, 4]
        assert utility_truncation_order([], _linear_model()) == []


def test_csv_round_trip(tmp_path):
    W = har_sample(4, 9, seed=6)
    path = tmp_path / "weights.csv"
    save_weights_csv(W, path)
    assert np.array_equal(load_weights_csv(path), W)
