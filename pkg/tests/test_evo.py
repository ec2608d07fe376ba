"""Evolutionary core tests: sorting vs brute force, variation operator statistics."""

import numpy as np
import pytest

from iemo.evo import (
    Population,
    Solution,
    VariationConfig,
    crowding_distance,
    dominates,
    fast_nondominated_sort,
    polynomial_mutation,
    sbx_crossover,
    sort_objective_rows,
)


def _brute_force_fronts(F):
    """Repeatedly peel the nondominated subset using pairwise scalar loops."""
    def dom(a, b):
        return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))

    remaining = list(range(len(F)))
    fronts = []
    while remaining:
        front = [i for i in remaining
                 if not any(dom(F[j], F[i]) for j in remaining if j != i)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def test_dominates_basic_cases():
    assert dominates(np.array([1.0, 2.0]), np.array([2.0, 2.0]))
    assert not dominates(np.array([1.0, 2.0]), np.array([2.0, 1.0]))
    assert not dominates(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    assert not dominates(np.array([2.0, 2.0]), np.array([1.0, 2.0]))


def test_dominates_is_antisymmetric_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = rng.random(4), rng.random(4)
        assert not (dominates(a, b) and dominates(b, a))


def test_dominates_rejects_mismatch():
    with pytest.raises(ValueError):
        dominates(np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))


@pytest.mark.parametrize("m,n_points,seed", [(2, 60, 1), (3, 200, 2), (5, 120, 3)])
def test_sort_matches_brute_force(m, n_points, seed):
    rng = np.random.default_rng(seed)
    # quantized objectives so ties and duplicates actually occur
    F = np.floor(rng.random((n_points, m)) * 6.0) / 6.0
    assert sort_objective_rows(F) == _brute_force_fronts(F)


def test_sort_is_stable_within_fronts():
    rng = np.random.default_rng(9)
    F = np.floor(rng.random((150, 3)) * 5.0)
    for front in sort_objective_rows(F):
        assert front == sorted(front)


def test_sort_layering_property():
    # each member of front k>0 is dominated by someone in front k-1
    rng = np.random.default_rng(4)
    F = rng.random((80, 3))
    fronts = sort_objective_rows(F)
    for k in range(1, len(fronts)):
        for i in fronts[k]:
            assert any(dominates(F[j], F[i]) for j in fronts[k - 1])


def test_sort_single_and_empty():
    assert sort_objective_rows(np.empty((0, 3))) == []
    assert sort_objective_rows(np.array([[1.0, 2.0]])) == [[0]]


def test_fast_nondominated_sort_stamps_ranks():
    pop = Population([Solution(np.zeros(1), f) for f in
                      [np.array([0.0, 1.0]), np.array([1.0, 0.0]),
                       np.array([2.0, 2.0]), np.array([0.5, 0.5])]], capacity=4)
    fronts = fast_nondominated_sort(pop)
    assert fronts == [[0, 1, 3], [2]]
    assert [s.rank for s in pop] == [0, 0, 1, 0]


def test_crowding_distance_fixture():
    F = np.array([[0.0, 1.0], [0.25, 0.75], [0.75, 0.25], [1.0, 0.0]])
    d = crowding_distance(F)
    assert np.isinf(d[0]) and np.isinf(d[3])
    assert d[1] == pytest.approx(0.75 + 0.75)
    assert d[2] == pytest.approx(0.75 + 0.75)
    assert np.isinf(crowding_distance(F[:2])).all()


# ---------------------------------------------------------------------------
# variation operators

BOUNDS = (np.zeros(8), np.ones(8))


def test_sbx_children_stay_in_bounds():
    cfg = VariationConfig(p_c=1.0, eta_c=30.0)
    rng = np.random.default_rng(12)
    lower, upper = BOUNDS
    for _ in range(2000):
        p1, p2 = rng.random(8), rng.random(8)
        c1, c2 = sbx_crossover(p1, p2, cfg, lower, upper, rng)
        assert np.all(c1 >= lower) and np.all(c1 <= upper)
        assert np.all(c2 >= lower) and np.all(c2 <= upper)


def test_sbx_child_mean_is_parent_midpoint():
    cfg = VariationConfig(p_c=1.0, eta_c=30.0)
    rng = np.random.default_rng(5)
    lower, upper = BOUNDS
    p1 = np.full(8, 0.35)
    p2 = np.full(8, 0.6)
    acc = np.zeros(8)
    trials = 20000
    for _ in range(trials):
        c1, c2 = sbx_crossover(p1, p2, cfg, lower, upper, rng)
        acc += c1
    mean = acc / trials
    np.testing.assert_allclose(mean, 0.475, rtol=0.01)


def test_sbx_p_c_zero_copies_parents():
    cfg = VariationConfig(p_c=0.0)
    rng = np.random.default_rng(1)
    p1, p2 = rng.random(8), rng.random(8)
    c1, c2 = sbx_crossover(p1, p2, cfg, *BOUNDS, rng)
    np.testing.assert_array_equal(c1, p1)
    np.testing.assert_array_equal(c2, p2)
    assert c1 is not p1  # children are fresh copies


def test_sbx_deterministic_given_seed():
    cfg = VariationConfig()
    p1, p2 = np.full(8, 0.2), np.full(8, 0.9)
    out1 = sbx_crossover(p1, p2, cfg, *BOUNDS, np.random.default_rng(77))
    out2 = sbx_crossover(p1, p2, cfg, *BOUNDS, np.random.default_rng(77))
    np.testing.assert_array_equal(out1[0], out2[0])
    np.testing.assert_array_equal(out1[1], out2[1])


def test_mutation_stays_in_bounds_even_at_boundary():
    cfg = VariationConfig(p_m=1.0, eta_m=20.0)
    lower, upper = BOUNDS
    rng = np.random.default_rng(3)
    for x0 in (0.0, 1.0, 0.5):
        x = np.full(8, x0)
        for _ in range(500):
            y = polynomial_mutation(x, cfg, lower, upper, rng)
            assert np.all(y >= lower) and np.all(y <= upper)


def test_mutation_symmetric_at_center():
    cfg = VariationConfig(p_m=1.0, eta_m=20.0)
    rng = np.random.default_rng(8)
    x = np.full(8, 0.5)
    acc = 0.0
    trials = 20000
    for _ in range(trials):
        acc += polynomial_mutation(x, cfg, *BOUNDS, rng).mean()
    assert acc / trials == pytest.approx(0.5, abs=0.005)


def test_mutation_default_rate_is_one_over_n():
    cfg = VariationConfig(p_m=None)
    rng = np.random.default_rng(2)
    x = np.full(8, 0.5)
    changed = 0
    trials = 20000
    for _ in range(trials):
        changed += int(np.sum(polynomial_mutation(x, cfg, *BOUNDS, rng) != x))
    # expect ~ trials * n * (1/n) = trials mutated coordinates
    assert changed == pytest.approx(trials, rel=0.05)
