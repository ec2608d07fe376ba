"""Decision-maker simulation and consultation plumbing.

The artificial DM carries a golden Chebyshev value function
psi(f) = max_j |f_j - z*_j| / w*_j and judges a pair by comparing golden
values, optionally flipping the verdict with probability exp(-kappa * delta)
where delta is the golden-value gap.  Candidate selection for a consultation
deduplicates the population in objective space and takes the top scorers under
the learned utility; before any model exists a farthest-point spread over the
first nondominated front is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .evo import sort_objective_rows

TIE_TOL = 1e-12


class DMUnavailable(RuntimeError):
    """The DM cannot answer (disconnected, timed out, or aborted the session)."""


@dataclass(frozen=True)
class Judgment:
    """Outcome of one pairwise query: c = 1 (first better), -1, or 0."""

    c: int
    flipped: bool = False

    def __post_init__(self):
        if self.c not in (1, -1, 0):
            raise ValueError(f"judgment outcome must be 1, -1 or 0, got {self.c}")


@runtime_checkable
class DecisionMaker(Protocol):
    def answer(self, fi: np.ndarray, fj: np.ndarray) -> Judgment: ...


class DMOracle:
    """Simulated DM with golden weights w* > 0, reference z*, consistency kappa.

    kappa = None (or inf) gives a noiseless oracle; a finite kappa > 0 flips
    each decisive judgment with probability exp(-kappa * |psi_i - psi_j|).
    Ties within 1e-12 return c = 0 and are never flipped; no random draw is
    consumed for them, so noiseless and tied paths leave the rng untouched.
    """

    def __init__(self, w_star, z_star=None, kappa: float | None = None, seed: int = 0):
        self.w_star = np.asarray(w_star, dtype=float)
        if self.w_star.ndim != 1 or np.any(self.w_star <= 0.0):
            raise ValueError("golden weights must be a strictly positive vector")
        m = len(self.w_star)
        self.z_star = np.zeros(m) if z_star is None else np.asarray(z_star, dtype=float)
        if self.z_star.shape != (m,):
            raise ValueError("z_star dimension does not match w_star")
        if kappa is not None and not kappa > 0.0:
            raise ValueError("kappa must be positive (None for noiseless)")
        self.kappa = None if kappa is None or np.isinf(kappa) else float(kappa)
        self.rng = np.random.default_rng(seed)

    def golden_value(self, f) -> float:
        f = np.asarray(f, dtype=float)
        if f.shape != self.w_star.shape:
            raise ValueError("objective dimension does not match golden weights")
        return float(np.max(np.abs(f - self.z_star) / self.w_star))

    def compare(self, fi, fj) -> Judgment:
        delta = self.golden_value(fj) - self.golden_value(fi)
        if abs(delta) <= TIE_TOL:
            return Judgment(0)
        c = 1 if delta > 0.0 else -1
        if self.kappa is not None and self.rng.random() < np.exp(-self.kappa * abs(delta)):
            return Judgment(-c, flipped=True)
        return Judgment(c)

    # DecisionMaker interface
    answer = compare


def biased_weight(m: int, preferred: int) -> np.ndarray:
    """Experiment utopia weights: the preferred objective gets 5, the rest 1."""
    if not 0 <= preferred < m:
        raise ValueError("preferred objective index out of range")
    w = np.ones(m)
    w[preferred] = 5.0
    return w


def _dedupe(members) -> list[int]:
    # exact objective-vector equality; first occurrence survives
    seen = set()
    keep = []
    for i, s in enumerate(members):
        key = np.ascontiguousarray(s.f).tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return keep


def select_candidates(pop, model, mu: int) -> list:
    """Pick the mu solutions to put in front of the DM.

    With a utility model: the top mu by score over the deduplicated
    population.  Without one (bootstrap consultation): complete nondominated
    fronts are taken in rank order while they fit, and the remainder of mu is
    filled from the next front by farthest-point traversal in per-objective
    min-max normalized space; when nothing is taken yet the walk starts at
    the lowest normalized objective sum.  Ties go to the lowest index
    throughout.  Fewer than mu distinct members returns all of them.
    """
    if mu < 1:
        raise ValueError("mu must be positive")
    members = list(pop)
    keep = _dedupe(members)
    distinct = [members[i] for i in keep]
    if len(distinct) <= mu:
        return list(distinct)

    F = np.stack([s.f for s in distinct])
    if model is not None:
        u = model.score_batch(F)
        order = np.argsort(-u, kind="stable")
        return [distinct[i] for i in order[:mu]]

    taken: list[int] = []
    for front in sort_objective_rows(F):
        if len(taken) + len(front) <= mu:
            taken.extend(front)
            if len(taken) == mu:
                break
            continue
        pool = taken + front
        G = F[pool]
        lo = G.min(axis=0)
        span = G.max(axis=0) - lo
        Z = (G - lo) / np.where(span > 0.0, span, 1.0)
        n_seed = len(taken)
        if n_seed == 0:
            start = int(np.argmin(Z.sum(axis=1)))
            picks = [start]
            dist = np.linalg.norm(Z - Z[start], axis=1)
            dist[start] = -np.inf
        else:
            picks = list(range(n_seed))
            dist = np.min(
                np.linalg.norm(Z[:, None, :] - Z[None, :n_seed, :], axis=2), axis=1)
            dist[:n_seed] = -np.inf
        while len(picks) < mu:
            nxt = int(np.argmax(dist))  # argmax takes the first (lowest index) tie
            picks.append(nxt)
            dist = np.minimum(dist, np.linalg.norm(Z - Z[nxt], axis=1))
            dist[nxt] = -np.inf
        taken = [pool[i] for i in picks]
        break
    return [distinct[i] for i in taken]


def enumerate_queries(candidates) -> list[tuple[int, int]]:
    """All C(mu, 2) index pairs over the candidate list, canonical i < j."""
    n = len(candidates)
    if n < 2:
        raise ValueError("need at least two candidates to form a query")
    return [(i, j) for i in range(n) for j in range(i + 1, n)]
