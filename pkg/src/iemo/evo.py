"""Evolutionary core: solution containers, dominance sorting, real-coded variation.

Variation follows Deb's real-coded operators: simulated binary crossover with
per-variable application probability 0.5 and symmetric children, and bounded
polynomial mutation.  Offspring are clamped to the box.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Solution:
    """One individual: decision vector, objectives, and cached annotations."""

    x: np.ndarray
    f: np.ndarray
    utility: float | None = None
    rank: int | None = None

    def copy(self) -> "Solution":
        return Solution(self.x.copy(), self.f.copy(), self.utility, self.rank)


@dataclass
class Population:
    """Ordered container with a nominal capacity (the survivor count N)."""

    members: list[Solution] = field(default_factory=list)
    capacity: int = 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def objectives(self) -> np.ndarray:
        return np.stack([s.f for s in self.members]) if self.members else np.empty((0, 0))


@dataclass(frozen=True)
class VariationConfig:
    """SBX / polynomial mutation parameters.  p_m = None means 1/n."""

    p_c: float = 1.0
    eta_c: float = 30.0
    p_m: float | None = None
    eta_m: float = 20.0


def dominates(a, b) -> bool:
    """Pareto dominance under minimization: a no worse everywhere, better somewhere."""
    fa = a.f if isinstance(a, Solution) else np.asarray(a, dtype=float)
    fb = b.f if isinstance(b, Solution) else np.asarray(b, dtype=float)
    if fa.shape != fb.shape:
        raise ValueError(f"objective dimension mismatch: {fa.shape} vs {fb.shape}")
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def sort_objective_rows(F: np.ndarray) -> list[list[int]]:
    """Nondominated sorting of an (N, m) objective matrix into index fronts.

    Domination counts with an explicit dominated-set matrix; fronts are peeled
    in rounds and kept in ascending input order, so the sort is stable.
    """
    F = np.asarray(F, dtype=float)
    N = F.shape[0]
    if N == 0:
        return []
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    count = dom.sum(axis=0).astype(int)
    assigned = np.zeros(N, dtype=bool)
    fronts: list[list[int]] = []
    while not assigned.all():
        cur = np.where((count == 0) & ~assigned)[0]
        fronts.append([int(i) for i in cur])
        assigned[cur] = True
        count = count - dom[cur].sum(axis=0)
    return fronts


def fast_nondominated_sort(pop: Population) -> list[list[int]]:
    """Sort a population into fronts and stamp each member's rank (0-based)."""
    fronts = sort_objective_rows(pop.objectives()) if len(pop) else []
    for r, front in enumerate(fronts):
        for i in front:
            pop[i].rank = r
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance of one front; boundary points get +inf."""
    F = np.asarray(F, dtype=float)
    N, m = F.shape
    d = np.zeros(N)
    if N <= 2:
        d[:] = np.inf
        return d
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        fj = F[order, j]
        span = fj[-1] - fj[0]
        d[order[0]] = np.inf
        d[order[-1]] = np.inf
        if span > 0.0:
            d[order[1:-1]] += (fj[2:] - fj[:-2]) / span
    return d


def sbx_crossover(
    p1: np.ndarray,
    p2: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover (Deb & Agrawal) producing two children.

    The whole pair is crossed with probability p_c; each variable then
    participates with probability 0.5.  Children are symmetric around the
    parent midpoint (a fair coin assigns the near/far child per variable)
    and are clamped to the box.
    """
    c1 = p1.copy()
    c2 = p2.copy()
    if rng.random() > cfg.p_c:
        return c1, c2
    n = p1.size
    pick = rng.random(n) <= 0.5
    u = rng.random(n)
    swap = rng.random(n) <= 0.5
    mask = pick & (np.abs(p1 - p2) > 1e-14)
    if mask.any():
        exp = 1.0 / (cfg.eta_c + 1.0)
        beta = np.where(u <= 0.5, (2.0 * u) ** exp, (0.5 / (1.0 - u)) ** exp)
        lo = np.minimum(p1, p2)
        hi = np.maximum(p1, p2)
        near = 0.5 * ((1.0 + beta) * lo + (1.0 - beta) * hi)
        far = 0.5 * ((1.0 - beta) * lo + (1.0 + beta) * hi)
        a = np.where(swap, far, near)
        b = np.where(swap, near, far)
        c1[mask] = a[mask]
        c2[mask] = b[mask]
        np.clip(c1, lower, upper, out=c1)
        np.clip(c2, lower, upper, out=c2)
    # exchangeable children: uncrossed variables would otherwise stay biased
    # toward their own parent
    if rng.random() <= 0.5:
        return c2, c1
    return c1, c2


def polynomial_mutation(
    x: np.ndarray,
    cfg: VariationConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Bounded polynomial mutation; each variable mutates with probability p_m."""
    n = x.size
    p_m = cfg.p_m if cfg.p_m is not None else 1.0 / n
    y = x.copy()
    do = rng.random(n) <= p_m
    u = rng.random(n)
    if not do.any():
        return y
    span = upper - lower
    d1 = (x - lower) / span
    d2 = (upper - x) / span
    expo = 1.0 / (cfg.eta_m + 1.0)
    with np.errstate(invalid="ignore"):
        low_side = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (cfg.eta_m + 1.0)) ** expo - 1.0
        high_side = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (cfg.eta_m + 1.0)) ** expo
    delta = np.where(u < 0.5, low_side, high_side)
    y[do] = x[do] + delta[do] * span[do]
    np.clip(y, lower, upper, out=y)
    return y
