"""Reference weight vectors: generation, sampling, preference-driven adjustment.

Weight vectors live on the probability simplex (nonnegative, summing to one).
Two generators are provided: the Das-Dennis simplex lattice and a hit-and-run
sampler that draws uniformly from the simplex intersected with box bounds.
After a consultation, `adjust_weights` drags non-promising vectors toward the
vectors associated with the highest-utility solutions, which concentrates the
search around the decision maker's region of interest.
"""

from __future__ import annotations

import csv
import math
import warnings

import numpy as np


class ElicitationError(ValueError):
    """Raised for infeasible bounds or malformed weight sets."""


def das_dennis(m: int, H: int) -> np.ndarray:
    """All compositions of H into m parts, divided by H (C(H+m-1, m-1) rows)."""
    if m < 1 or H < 1:
        raise ElicitationError("need m >= 1 and H >= 1")
    rows: list[list[int]] = []

    def rec(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            rows.append(prefix + [left])
            return
        for i in range(left + 1):
            rec(prefix + [i], left - i, slots - 1)

    rec([], H, m)
    return np.array(rows, dtype=float) / H


def har_sample(
    m: int,
    count: int,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    burn_in: int = 1000,
    thinning: int = 10,
    seed: int = 0,
) -> np.ndarray:
    """Hit-and-run sampling of the bounded simplex {w: sum w = 1, lo <= w <= up}.

    Each returned vector is the endpoint of its own chain, advanced
    burn_in + thinning uniform chord steps from the bound-interpolated center.
    Chains run vectorized off one generator, so the draws are mutually
    independent and the output is deterministic per seed.
    """
    lo = np.zeros(m) if lower is None else np.asarray(lower, dtype=float)
    up = np.ones(m) if upper is None else np.asarray(upper, dtype=float)
    if lo.shape != (m,) or up.shape != (m,):
        raise ElicitationError("bounds must match the weight dimension")
    if np.any(lo > up) or lo.sum() > 1.0 + 1e-12 or up.sum() < 1.0 - 1e-12:
        raise ElicitationError("infeasible weight bounds")
    if count < 1:
        raise ElicitationError("count must be positive")
    if m == 1:
        return np.ones((count, 1))

    span = up - lo
    span_total = float(span.sum())
    free = span > 0.0
    if span_total <= 0.0 or free.sum() <= 1:  # bounds determine the point
        w0 = lo.copy()
        if span_total > 0.0:
            w0 = lo + (1.0 - lo.sum()) / span_total * span
        return np.tile(w0, (count, 1))
    w0 = lo + (1.0 - lo.sum()) / span_total * span

    rng = np.random.default_rng(seed)
    W = np.tile(w0, (count, 1))
    eps = 1e-12
    for _ in range(burn_in + thinning):
        D = rng.standard_normal((count, m))
        D[:, ~free] = 0.0  # pinned coordinates never move
        D[:, free] -= D[:, free].mean(axis=1, keepdims=True)
        D /= np.maximum(np.linalg.norm(D, axis=1, keepdims=True), eps)
        with np.errstate(divide="ignore", invalid="ignore"):
            up_gap = (up[None, :] - W) / D
            lo_gap = (lo[None, :] - W) / D
        pos = D > eps
        neg = D < -eps
        t_hi = np.where(pos, up_gap, np.where(neg, lo_gap, np.inf)).min(axis=1)
        t_lo = np.where(pos, lo_gap, np.where(neg, up_gap, -np.inf)).max(axis=1)
        W += rng.uniform(t_lo, t_hi)[:, None] * D
        # shed float drift off the hyperplane, only over movable coordinates
        W[:, free] += (1.0 - W.sum(axis=1, keepdims=True)) / free.sum()
        np.clip(W, lo[None, :], up[None, :], out=W)
    return W


def adjust_weights(
    W: np.ndarray,
    pop,
    model,
    mu: int,
    eta_step: float,
    association="tchebycheff",
    z: np.ndarray | None = None,
) -> np.ndarray:
    """Drag non-promising weight vectors toward the preferred region.

    Steps: score the population with the utility model (utilities are stamped
    onto the members); collect the weight vectors associated with the top-mu
    solutions, deduplicated in priority (descending utility) order; let each
    promising vector attract its ceil((N - mu') / mu') nearest non-promising
    vectors, nearest first, each vector moved at most once by
    w <- w + eta_step (w_promising - w); clip at zero and renormalize.

    `association` maps a population member to the index of "its" weight
    vector: "index" (positional, the decomposition case), "tchebycheff"
    (the weight whose weighted Chebyshev value the member minimizes, ties to
    the lowest index; `z` defaults to the population ideal), or an explicit
    index array.
    """
    W = np.asarray(W, dtype=float)
    N = W.shape[0]
    members = list(pop)
    if not members:
        raise ElicitationError("population is empty")
    if mu < 1:
        raise ElicitationError("mu must be positive")
    if mu > len(members):
        warnings.warn(
            f"mu = {mu} exceeds population size {len(members)}; clamping",
            stacklevel=2,
        )
        mu = len(members)

    F = np.stack([s.f for s in members])
    u = model.score_batch(F)
    for s, ui in zip(members, u):
        s.utility = float(ui)
    order = np.argsort(-u, kind="stable")
    top = order[:mu]

    if isinstance(association, str) and association == "index":
        if len(members) != N:
            raise ElicitationError(
                "index association needs one weight vector per member")
        assoc = top
    elif isinstance(association, str) and association == "tchebycheff":
        zz = F.min(axis=0) if z is None else np.asarray(z, dtype=float)
        # (mu, N): weighted Chebyshev value of each top solution under each weight
        g = np.max(W[None, :, :] * np.abs(F[top][:, None, :] - zz[None, None, :]), axis=2)
        assoc = np.argmin(g, axis=1)
    else:
        mapping = np.asarray(association, dtype=int)
        if mapping.shape != (len(members),):
            raise ElicitationError("association array must map every member")
        assoc = mapping[top]

    promising = list(dict.fromkeys(int(a) for a in assoc))
    out = W.copy()
    if eta_step == 0.0:  # must leave the weight set bit-identical
        return out
    mu_eff = len(promising)
    pool = [i for i in range(N) if i not in set(promising)]
    moved: list[int] = []
    if pool:
        quota = math.ceil(len(pool) / mu_eff)
        for p in promising:
            if not pool:
                break
            d = np.linalg.norm(W[pool] - W[p][None, :], axis=1)
            take = np.argsort(d, kind="stable")[:quota]
            chosen = [pool[i] for i in take]
            for c in chosen:
                out[c] = W[c] + eta_step * (W[p] - W[c])
            moved.extend(chosen)
            pool = [i for i in pool if i not in set(chosen)]
    if moved:
        rows = out[moved]
        np.clip(rows, 0.0, None, out=rows)
        out[moved] = rows / rows.sum(axis=1, keepdims=True)
    return out


def utility_truncation_order(solutions, model) -> list[int]:
    """Indices of `solutions` by descending model utility; ties keep input order."""
    members = list(solutions)
    if not members:
        return []
    u = model.score_batch(np.stack([s.f for s in members]))
    return [int(i) for i in np.argsort(-u, kind="stable")]


def save_weights_csv(W: np.ndarray, path) -> None:
    W = np.asarray(W, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"w{j}" for j in range(W.shape[1])])
        for row in W:
            writer.writerow([f"{v:.17g}" for v in row])


def load_weights_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    W = np.array(rows)
    if W.ndim != 2 or W.shape[1] != len(header):
        raise ElicitationError("malformed weight csv")
    return W
