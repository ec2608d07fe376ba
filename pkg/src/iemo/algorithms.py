"""Preference-guided versions of NSGA-II, MOEA/D, and R2-IBEA.

All three share one interactive loop: run the vanilla optimizer for a warmup
period, then every tau generations show the DM C(mu, 2) pairs drawn from the
current population, retrain the utility model from scratch on every judgment
collected so far, and fold the result back into the search.  NSGA-II consumes
the model directly (tournament tie-breaks and truncation of the split front);
MOEA/D and R2-IBEA instead drag their weight vectors toward the preferred
region and keep selecting as usual.

The estimated ideal point used by the scalarized algorithms is the running
componentwise minimum over every solution evaluated so far; only the DM
oracle's own value function uses a fixed reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .dm import DMOracle, DMUnavailable, enumerate_queries, select_candidates
from .evo import (
    Population,
    Solution,
    VariationConfig,
    crowding_distance,
    fast_nondominated_sort,
    polynomial_mutation,
    sbx_crossover,
    sort_objective_rows,
)
from .problems import ProblemSpec, evaluate_batch, golden_point
from .ranknet import ComparisonRecord, TrainConfig, TrainingError, train
from .weights import adjust_weights, har_sample, utility_truncation_order

ALGORITHMS = ("insga2", "imoead", "ir2ibea")


def default_population_size(m: int) -> int:
    """Population / weight count used by the experiments for m objectives."""
    if m >= 10:
        return 220
    if m >= 8:
        return 120
    return 100


@dataclass(frozen=True)
class RunConfig:
    """Everything one optimization run needs; defaults follow the experiments."""

    algorithm: str
    problem: ProblemSpec
    N: int = 100
    max_fe: int | None = None  # None: 300 * N
    tau: int = 10
    warmup_gens: int | None = None  # None: 3 * tau
    mu: int = 10
    eta_step: float = 0.2
    hidden_dim: int = 10
    sigma: float = 1.0
    interactive: bool = True
    variation: VariationConfig = field(default_factory=VariationConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    neighborhood_size: int = 20
    delta_nb: float = 0.9
    nr: int = 2
    weight_init: object = "har"  # "har" or an explicit (N, m) array
    seed: int | list = 0  # SeedSequence entropy; campaigns pass [master, cell, rep]

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.N < 2:
            raise ValueError("population size must be at least 2")
        if self.max_fe is None:
            object.__setattr__(self, "max_fe", 300 * self.N)
        if self.max_fe < self.N:
            raise ValueError("max_fe cannot be smaller than the population size")
        if self.tau <= 1:
            raise ValueError("tau must exceed 1")
        if self.warmup_gens is None:
            object.__setattr__(self, "warmup_gens", 3 * self.tau)
        if self.warmup_gens < 1:
            raise ValueError("warmup_gens must be at least 1")
        if self.mu < 2:
            raise ValueError("mu must be at least 2")
        if self.mu > self.N:
            raise ValueError("mu cannot exceed the population size")
        if self.eta_step < 0.0:
            raise ValueError("eta_step must be nonnegative")
        if not 0.0 <= self.delta_nb <= 1.0:
            raise ValueError("delta_nb must lie in [0, 1]")
        if self.nr < 1:
            raise ValueError("nr must be positive")


@dataclass(frozen=True)
class TrajectoryPoint:
    generation: int
    fe_used: int
    consulted: bool
    best_golden: float | None = None
    approx_error: float | None = None


@dataclass
class RunResult:
    final_population: Population
    consultation_log: list  # (generation, list of ComparisonRecord)
    trajectory: list[TrajectoryPoint]
    fe_used: int
    aborted: bool = False
    seed: int = 0
    model: object = None
    weights: np.ndarray | None = None


class _Budget:
    """Counts function evaluations and tracks the estimated ideal point."""

    def __init__(self, spec: ProblemSpec, max_fe: int):
        self.spec = spec
        self.max_fe = max_fe
        self.used = 0
        self.z_min: np.ndarray | None = None

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if self.used + len(X) > self.max_fe:
            raise RuntimeError("function-evaluation budget overrun")
        F = evaluate_batch(self.spec, X)
        self.used += len(X)
        lo = F.min(axis=0)
        self.z_min = lo if self.z_min is None else np.minimum(self.z_min, lo)
        return F


def tchebycheff(F, w, z) -> np.ndarray:
    """Weighted Chebyshev value max_j w_j |f_j - z_j| per row of F."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    return np.max(np.asarray(w) * np.abs(F - np.asarray(z)), axis=1)


def r2_indicator(A, W, z) -> float:
    """Mean over weight vectors of the best weighted Chebyshev value in A."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if A.size == 0 or W.size == 0:
        raise ValueError("r2 indicator needs nonempty solution and weight sets")
    G = np.max(W[:, None, :] * np.abs(A[None, :, :] - np.asarray(z)), axis=2)
    return float(G.min(axis=1).mean())


def _cheb_matrix(W: np.ndarray, F: np.ndarray, z: np.ndarray) -> np.ndarray:
    # (|W|, |F|) table of weighted Chebyshev values
    return np.max(W[:, None, :] * np.abs(F[None, :, :] - z), axis=2)


def _r2_contributions(G: np.ndarray, n: int) -> np.ndarray:
    """Per-member R2 loss when removed, from a (|W|, n) Chebyshev table.

    For each weight the removal of its minimizer raises that weight's term to
    the runner-up value; every other member contributes nothing.  Exact ties
    yield zero, which also makes duplicates free to remove.
    """
    part = np.partition(G, 1, axis=1)
    gap = part[:, 1] - part[:, 0]
    owners = np.argmin(G, axis=1)
    contrib = np.zeros(n)
    np.add.at(contrib, owners, gap)
    return contrib / G.shape[0]


def _tournament(rng, rank, key) -> int:
    # rank ascending, then key descending; a full tie keeps the first draw
    a = int(rng.integers(0, len(rank)))
    b = int(rng.integers(0, len(rank)))
    if rank[a] != rank[b]:
        return a if rank[a] < rank[b] else b
    if key[a] != key[b]:
        return a if key[a] > key[b] else b
    return a


def _make_offspring(pop, pick, variation, rng, lower, upper) -> np.ndarray:
    N = len(pop)
    X = []
    while len(X) < N:
        p1 = pop[pick()].x
        p2 = pop[pick()].x
        c1, c2 = sbx_crossover(p1, p2, variation, lower, upper, rng)
        X.append(polynomial_mutation(c1, variation, lower, upper, rng))
        if len(X) < N:
            X.append(polynomial_mutation(c2, variation, lower, upper, rng))
    return np.stack(X)


def nsga2_truncate(merged, N: int, model=None) -> list[int]:
    """Survivor indices: whole fronts while they fit, then the split front
    truncated by crowding distance (no model) or descending utility."""
    mF = np.stack([s.f for s in merged])
    survivors: list[int] = []
    for front in sort_objective_rows(mF):
        if len(survivors) + len(front) <= N:
            survivors.extend(front)
            if len(survivors) == N:
                break
            continue
        k = N - len(survivors)
        if model is None:
            cd = crowding_distance(mF[front])
            order = np.argsort(-cd, kind="stable")
        else:
            order = utility_truncation_order([merged[i] for i in front], model)
        survivors.extend(front[i] for i in order[:k])
        break
    return survivors


def insga2_generation(pop, model, variation, rng, budget, lower, upper) -> Population:
    """One NSGA-II generation; the learned utility replaces crowding distance.

    Without a model this is the vanilla algorithm.  With one, tournaments
    break rank ties by utility and the split front of the merged population
    is truncated in descending-utility order.
    """
    N = len(pop)
    fronts = fast_nondominated_sort(pop)
    rank = np.array([s.rank for s in pop])
    if model is None:
        key = np.empty(N)
        F = pop.objectives()
        for front in fronts:
            key[front] = crowding_distance(F[front])
    else:
        key = model.score_batch(pop.objectives())
        for s, u in zip(pop, key):
            s.utility = float(u)

    X = _make_offspring(pop, lambda: _tournament(rng, rank, key), variation,
                        rng, lower, upper)
    Foff = budget(X)
    merged = list(pop) + [Solution(x, f) for x, f in zip(X, Foff)]
    return Population([merged[i] for i in nsga2_truncate(merged, N, model)],
                      capacity=N)


def imoead_generation(pop, W, neighborhoods, variation, rng, budget, lower,
                      upper, delta_nb: float = 0.9, nr: int = 2) -> Population:
    """One MOEA/D generation: per-subproblem mating, ideal update, bounded
    neighborhood replacement under the weighted Chebyshev aggregation."""
    N = len(pop)
    members = [s.copy() for s in pop]
    for i in range(N):
        pool = neighborhoods[i] if rng.random() < delta_nb else np.arange(N)
        a, b = rng.choice(pool, 2, replace=False)
        c1, _ = sbx_crossover(members[a].x, members[b].x, variation, lower,
                              upper, rng)
        child_x = polynomial_mutation(c1, variation, lower, upper, rng)
        child_f = budget(child_x)[0]
        z = budget.z_min
        order = rng.permutation(pool)
        gap = np.abs(child_f - z)
        g_child = np.max(W[order] * gap, axis=1)
        F_inc = np.stack([members[j].f for j in order])
        g_inc = np.max(W[order] * np.abs(F_inc - z), axis=1)
        replaced = 0
        for pos, j in enumerate(order):
            if replaced >= nr:
                break
            if g_child[pos] < g_inc[pos]:
                members[j] = Solution(child_x.copy(), child_f.copy())
                replaced += 1
    return Population(members, capacity=N)


def r2_truncate(F, W, z, N: int) -> list[int]:
    """Greedily drop the member whose removal least increases the R2 value
    until N remain; ties fall to the lowest index.  Returns kept indices."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    G = _cheb_matrix(np.atleast_2d(np.asarray(W, dtype=float)), F,
                     np.asarray(z, dtype=float))
    alive = list(range(F.shape[0]))
    while len(alive) > N:
        inc = _r2_contributions(G[:, alive], len(alive))
        victim = int(np.argmin(inc))  # first minimum: lowest surviving index
        del alive[victim]
    return alive


def ir2ibea_generation(pop, W, variation, rng, budget, lower, upper) -> Population:
    """One R2-IBEA generation: N steady-state insertions.

    Each step mates two members by binary tournament on the current R2
    contributions, evaluates the first variated child, and immediately runs
    the greedy N+1 -> N removal, so every child faces selection on arrival.
    """
    N = len(pop)
    members = list(pop)
    mF = pop.objectives().copy()
    zeros = np.zeros(N, dtype=int)
    z = budget.z_min
    G = _cheb_matrix(W, mF, z)
    for _ in range(N):
        fitness = _r2_contributions(G, N)
        a = _tournament(rng, zeros, fitness)
        b = _tournament(rng, zeros, fitness)
        c1, _ = sbx_crossover(members[a].x, members[b].x, variation, lower,
                              upper, rng)
        child_x = polynomial_mutation(c1, variation, lower, upper, rng)
        child_f = budget(child_x)[0]
        members.append(Solution(child_x, child_f))
        mF = np.vstack([mF, child_f])
        if np.array_equal(budget.z_min, z):
            col = np.max(W * np.abs(child_f - z), axis=1)
            G = np.column_stack([G, col])
        else:  # the child moved the estimated ideal: refresh the table
            z = budget.z_min
            G = _cheb_matrix(W, mF, z)
        inc = _r2_contributions(G, N + 1)
        victim = int(np.argmin(inc))  # first minimum: lowest surviving index
        del members[victim]
        mF = np.delete(mF, victim, axis=0)
        G = np.delete(G, victim, axis=1)
    return Population(members, capacity=N)


def _neighborhoods(W: np.ndarray, T: int) -> np.ndarray:
    D = np.linalg.norm(W[:, None, :] - W[None, :, :], axis=2)
    return np.argsort(D, axis=1, kind="stable")[:, :T]


def _consult(pop, model, mu, dm, gen):
    candidates = select_candidates(pop, model, mu)
    if len(candidates) < 2:  # population collapsed to one distinct point
        return None
    pairs = enumerate_queries(candidates)
    begin = getattr(dm, "begin_consultation", None)
    if begin is not None:
        begin(gen, len(pairs))
    records = []
    for i, j in pairs:
        judgment = dm.answer(candidates[i].f, candidates[j].f)
        records.append(ComparisonRecord(fi=candidates[i].f.copy(),
                                        fj=candidates[j].f.copy(),
                                        c=judgment.c))
    return records


def run(config: RunConfig, dm, observer=None) -> RunResult:
    """Execute one interactive run; deterministic for a deterministic DM.

    Consultations happen just before generations warmup_gens + 1 + k*tau.
    A DMUnavailable from the DM aborts the run and returns the partial
    result; a consultation whose judgments are all indifferent leaves the
    current model in place.  `observer(gen, pop, consulted)` is called on
    the initial population and after every generation.
    """
    spec = config.problem
    root = np.random.SeedSequence(config.seed)
    run_key, weight_key = root.spawn(2)
    rng = np.random.default_rng(run_key)
    budget = _Budget(spec, config.max_fe)

    X0 = rng.uniform(spec.lower, spec.upper, (config.N, spec.n))
    F0 = budget(X0)
    pop = Population([Solution(x, f) for x, f in zip(X0, F0)], capacity=config.N)

    W = None
    B = None
    if config.algorithm in ("imoead", "ir2ibea"):
        if isinstance(config.weight_init, np.ndarray):
            W = config.weight_init.copy()
        else:
            W = har_sample(spec.m, config.N, seed=weight_key)
        if config.algorithm == "imoead":
            B = _neighborhoods(W, min(config.neighborhood_size, config.N))

    golden = None
    oracle = dm if isinstance(dm, DMOracle) else None
    if oracle is not None and np.all(oracle.z_star == 0.0):
        golden = golden_point(spec, oracle.w_star)

    trajectory: list[TrajectoryPoint] = []
    log: list = []
    records: list[ComparisonRecord] = []
    model = None
    aborted = False

    def snapshot(gen: int, consulted: bool) -> None:
        best = err = None
        if oracle is not None:
            F = pop.objectives()
            psi = np.max(np.abs(F - oracle.z_star) / oracle.w_star, axis=1)
            best = float(psi.min())
            if golden is not None:
                err = float(np.linalg.norm(F - golden, axis=1).min().item())
        trajectory.append(TrajectoryPoint(gen, budget.used, consulted, best, err))

    snapshot(0, False)
    if observer is not None:
        observer(0, pop, False)
    gen = 0
    while budget.used + config.N <= config.max_fe:
        gen += 1
        consulted = False
        due = (config.interactive and gen > config.warmup_gens
               and (gen - config.warmup_gens - 1) % config.tau == 0)
        if due:
            try:
                new_records = _consult(pop, model, config.mu, dm, gen)
            except DMUnavailable:
                aborted = True
                break
            if new_records is not None:
                consulted = True
                records.extend(new_records)
                log.append((gen, new_records))
                base = (list(config.seed)
                        if isinstance(config.seed, (list, tuple))
                        else [config.seed])
                tcfg = replace(config.train, init_seed=base + [len(log) - 1])
                F = pop.objectives()
                try:
                    model = train(records, input_dim=spec.m, cfg=tcfg,
                                  hidden_dim=config.hidden_dim,
                                  sigma=config.sigma,
                                  norm_bounds=(F.min(axis=0), F.max(axis=0)))
                except TrainingError:  # every judgment so far is a tie
                    pass
                if model is not None and W is not None:
                    if config.algorithm == "imoead":
                        W = adjust_weights(W, pop, model, config.mu,
                                           config.eta_step, association="index")
                        B = _neighborhoods(W, min(config.neighborhood_size,
                                                  config.N))
                    else:
                        W = adjust_weights(W, pop, model, config.mu,
                                           config.eta_step,
                                           association="tchebycheff",
                                           z=budget.z_min)

        if config.algorithm == "insga2":
            pop = insga2_generation(pop, model, config.variation, rng, budget,
                                    spec.lower, spec.upper)
        elif config.algorithm == "imoead":
            pop = imoead_generation(pop, W, B, config.variation, rng, budget,
                                    spec.lower, spec.upper, config.delta_nb,
                                    config.nr)
        else:
            pop = ir2ibea_generation(pop, W, config.variation, rng, budget,
                                     spec.lower, spec.upper)
        snapshot(gen, consulted)
        if observer is not None:
            observer(gen, pop, consulted)

    return RunResult(final_population=pop, consultation_log=log,
                     trajectory=trajectory, fe_used=budget.used,
                     aborted=aborted, seed=config.seed, model=model, weights=W)
