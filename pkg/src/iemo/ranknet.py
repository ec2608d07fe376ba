"""Pairwise learning-to-rank utility model over objective vectors.

A small feed-forward scorer u(f) is trained from ternary outcome comparisons
(first better / second better / indifferent).  The probability that the first
item of a pair beats the second is a logistic link on the score difference,

    P(i beats j) = 1 / (1 + exp(-sigma * (u_i - u_j))),

and each comparison contributes the cross-entropy written in its reduced form

    loss_ij = (1 - c_ij)/2 * sigma * (u_i - u_j) + log(1 + exp(-sigma * (u_i - u_j)))

with c_ij = 1 (i better), -1 (j better) or 0 (indifferent).  The gradient
factorizes through one multiplier per pair,

    lambda_ij = sigma * ((1 - c_ij)/2 - 1 / (1 + exp(sigma * (u_i - u_j)))),

so training touches each *distinct* solution once per sweep instead of once
per pair.

The default scorer has one hidden tanh layer; ``hidden_dim=0`` degenerates to
the plain linear utility u(f) = w . f used by hand-checkable examples.  Inputs
may be normalized per objective by attached min/max bounds (taken from the
current population when training inside an optimization run).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class TrainingError(ValueError):
    """Raised when a training set cannot produce a model."""


@dataclass(frozen=True)
class ComparisonRecord:
    """One answered query: objective vectors and outcome c in {1, -1, 0}."""

    fi: np.ndarray
    fj: np.ndarray
    c: int

    def __post_init__(self):
        if self.c not in (-1, 0, 1):
            raise ValueError(f"outcome must be -1, 0 or 1, got {self.c}")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 500
    batch_size: int | None = None  # None = full batch
    init_seed: int = 0
    allow_indifferent_only: bool = False


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softplus(z: np.ndarray) -> np.ndarray:
    # log(1 + e^z) without overflow on either tail
    return np.where(z > 0.0, z, 0.0) + np.log1p(np.exp(-np.abs(z)))


@dataclass
class RankNet:
    """Utility scorer with a flat parameter vector.

    hidden_dim > 0: params = [W1 (h x m, row major), b1 (h), w2 (h), b2].
    hidden_dim = 0: params = [w (m)], u(f) = w . f.
    """

    input_dim: int
    hidden_dim: int = 10
    sigma: float = 1.0
    params: np.ndarray = None
    norm_lo: np.ndarray | None = None
    norm_hi: np.ndarray | None = None
    jacobian_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.params is None:
            self.params = np.zeros(self.n_params)
        self.params = np.asarray(self.params, dtype=float)
        if self.params.shape != (self.n_params,):
            raise ValueError(
                f"expected {self.n_params} parameters, got {self.params.shape}")

    @property
    def n_params(self) -> int:
        m, h = self.input_dim, self.hidden_dim
        return m if h == 0 else h * m + h + h + 1

    def _unpack(self):
        m, h = self.input_dim, self.hidden_dim
        W1 = self.params[: h * m].reshape(h, m)
        b1 = self.params[h * m: h * m + h]
        w2 = self.params[h * m + h: h * m + 2 * h]
        b2 = self.params[-1]
        return W1, b1, w2, b2

    def _normalize(self, F: np.ndarray) -> np.ndarray:
        if self.norm_lo is None:
            return F
        span = self.norm_hi - self.norm_lo
        span = np.where(span > 0.0, span, 1.0)
        return (F - self.norm_lo) / span

    def score_batch(self, F: np.ndarray) -> np.ndarray:
        F = np.atleast_2d(np.asarray(F, dtype=float))
        Z = self._normalize(F)
        if self.hidden_dim == 0:
            return Z @ self.params
        W1, b1, w2, b2 = self._unpack()
        return np.tanh(Z @ W1.T + b1) @ w2 + b2

    def score(self, f: np.ndarray) -> float:
        return float(self.score_batch(np.asarray(f, dtype=float)[None, :])[0])

    def jacobian_batch(self, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Scores and per-row derivative of u with respect to the flat params."""
        F = np.atleast_2d(np.asarray(F, dtype=float))
        self.jacobian_rows += F.shape[0]
        Z = self._normalize(F)
        if self.hidden_dim == 0:
            return Z @ self.params, Z.copy()
        W1, b1, w2, b2 = self._unpack()
        H = np.tanh(Z @ W1.T + b1)
        u = H @ w2 + b2
        gate = (1.0 - H * H) * w2[None, :]  # (n, h)
        J = np.concatenate(
            [
                (gate[:, :, None] * Z[:, None, :]).reshape(F.shape[0], -1),  # dW1
                gate,  # db1
                H,  # dw2
                np.ones((F.shape[0], 1)),  # db2
            ],
            axis=1,
        )
        return u, J

    def pair_probability(self, fi: np.ndarray, fj: np.ndarray) -> float:
        du = self.score(fi) - self.score(fj)
        return float(_sigmoid(np.array([self.sigma * du]))[0])

    def to_json(self) -> str:
        return json.dumps(
            {
                "input_dim": self.input_dim,
                "hidden_dim": self.hidden_dim,
                "sigma": self.sigma,
                "params": self.params.tolist(),
                "norm_lo": None if self.norm_lo is None else self.norm_lo.tolist(),
                "norm_hi": None if self.norm_hi is None else self.norm_hi.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RankNet":
        d = json.loads(text)
        return cls(
            input_dim=d["input_dim"],
            hidden_dim=d["hidden_dim"],
            sigma=d["sigma"],
            params=np.array(d["params"], dtype=float),
            norm_lo=None if d["norm_lo"] is None else np.array(d["norm_lo"]),
            norm_hi=None if d["norm_hi"] is None else np.array(d["norm_hi"]),
        )


# ---------------------------------------------------------------------------
# losses and gradients

def _compile(records: list[ComparisonRecord]):
    """Deduplicate objective vectors; pairs become index triples into the pool."""
    pool: dict[bytes, int] = {}
    rows: list[np.ndarray] = []

    def intern(f: np.ndarray) -> int:
        key = np.ascontiguousarray(np.asarray(f, dtype=float)).tobytes()
        idx = pool.get(key)
        if idx is None:
            idx = len(rows)
            pool[key] = idx
            rows.append(np.asarray(f, dtype=float))
        return idx

    ii = np.empty(len(records), dtype=int)
    jj = np.empty(len(records), dtype=int)
    cc = np.empty(len(records), dtype=float)
    for t, r in enumerate(records):
        ii[t] = intern(r.fi)
        jj[t] = intern(r.fj)
        cc[t] = r.c
    return np.stack(rows), ii, jj, cc


def _pair_losses(model: RankNet, u: np.ndarray, ii, jj, cc) -> np.ndarray:
    du = model.sigma * (u[ii] - u[jj])
    return 0.5 * (1.0 - cc) * du + _softplus(-du)


def pair_loss(model: RankNet, record: ComparisonRecord) -> float:
    u = model.score_batch(np.stack([record.fi, record.fj]))
    du = model.sigma * (u[0] - u[1])
    return float(0.5 * (1.0 - record.c) * du + _softplus(np.array([-du]))[0])


def total_loss(model: RankNet, records: list[ComparisonRecord]) -> float:
    if not records:
        return 0.0
    U, ii, jj, cc = _compile(records)
    return float(_pair_losses(model, model.score_batch(U), ii, jj, cc).sum())


def _lambdas(model: RankNet, u: np.ndarray, ii, jj, cc) -> np.ndarray:
    du = model.sigma * (u[ii] - u[jj])
    return model.sigma * (0.5 * (1.0 - cc) - _sigmoid(-du))


def gradient(model: RankNet, records: list[ComparisonRecord]) -> np.ndarray:
    """Gradient of the summed pair loss with respect to the flat parameters.

    Pairs are grouped by distinct solution: one jacobian row per distinct
    objective vector, combined with the per-pair multipliers.
    """
    if not records:
        return np.zeros(model.n_params)
    U, ii, jj, cc = _compile(records)
    u, J = model.jacobian_batch(U)
    lam = _lambdas(model, u, ii, jj, cc)
    alpha = np.bincount(ii, weights=lam, minlength=len(U)) - np.bincount(
        jj, weights=lam, minlength=len(U))
    return J.T @ alpha


def _forward(model: RankNet, Z: np.ndarray):
    """Forward pass on pre-normalized inputs; returns (u, hidden activations)."""
    if model.hidden_dim == 0:
        return Z @ model.params, None
    W1, b1, w2, _ = model._unpack()
    H = np.tanh(Z @ W1.T + b1)
    return H @ w2 + model.params[-1], H


def _backprop(model: RankNet, Z: np.ndarray, H, alpha: np.ndarray) -> np.ndarray:
    """Parameter gradient sum_s alpha_s du_s/dtheta on pre-normalized inputs."""
    if model.hidden_dim == 0:
        return Z.T @ alpha
    _, _, w2, _ = model._unpack()
    gate = (1.0 - H * H) * w2[None, :]
    gW1 = (gate * alpha[:, None]).T @ Z
    gb1 = gate.T @ alpha
    gw2 = H.T @ alpha
    return np.concatenate([gW1.ravel(), gb1, gw2, [alpha.sum()]])


def train(
    records: list[ComparisonRecord],
    input_dim: int,
    cfg: TrainConfig = TrainConfig(),
    hidden_dim: int = 10,
    sigma: float = 1.0,
    norm_bounds: tuple[np.ndarray, np.ndarray] | None = None,
) -> RankNet:
    """Fit a fresh model by gradient descent, returning the best-loss parameters.

    Retraining is always from scratch: the initial parameters are drawn
    uniformly from [-0.5, 0.5] with cfg.init_seed.  The returned parameters
    are the best seen across the schedule (including the initial point), so
    the final loss never exceeds the initial one.
    """
    for r in records:
        if len(r.fi) != input_dim or len(r.fj) != input_dim:
            raise TrainingError("comparison record dimension mismatch")

    rng = np.random.default_rng(cfg.init_seed)
    n_params = input_dim if hidden_dim == 0 else hidden_dim * (input_dim + 2) + 1
    model = RankNet(
        input_dim=input_dim,
        hidden_dim=hidden_dim,
        sigma=sigma,
        params=rng.uniform(-0.5, 0.5, size=n_params),
    )
    if norm_bounds is not None:
        model.norm_lo = np.asarray(norm_bounds[0], dtype=float)
        model.norm_hi = np.asarray(norm_bounds[1], dtype=float)

    informative = [r for r in records if r.c != 0]
    if not informative:
        if cfg.allow_indifferent_only:
            return model
        raise TrainingError("no informative (non-indifferent) comparisons to train on")

    U, ii, jj, cc = _compile(records)
    Z = model._normalize(U)
    n_pairs = len(records)
    n_unique = len(U)
    batch = cfg.batch_size if cfg.batch_size is not None else n_pairs
    batch = max(1, min(batch, n_pairs))
    shuffle_seed = (cfg.init_seed + 1 if isinstance(cfg.init_seed, int)
                    else list(cfg.init_seed) + [1])
    shuffle_rng = np.random.default_rng(shuffle_seed)
    sig = model.sigma

    best_loss = np.inf
    best_params = model.params
    if batch == n_pairs:
        # full-batch path: the pair structure is a fixed +1/-1 incidence matrix,
        # so score differences and the per-solution multipliers are matmuls; the
        # same forward pass feeds the keep-best check and the gradient, plus one
        # trailing evaluation-only sweep
        D = np.zeros((n_pairs, n_unique))
        D[np.arange(n_pairs), ii] += 1.0
        D[np.arange(n_pairs), jj] -= 1.0
        halfc = 0.5 * (1.0 - cc)
        for epoch in range(cfg.epochs + 1):
            u, H = _forward(model, Z)
            du = sig * (D @ u)
            t = np.exp(-np.abs(du))
            ramp = np.where(du < 0.0, -du, 0.0)
            loss = float((halfc * du + ramp + np.log1p(t)).sum())
            if loss < best_loss:
                best_loss = loss
                best_params = model.params.copy()
            if epoch == cfg.epochs:
                break
            sg = np.where(du >= 0.0, t, 1.0) / (1.0 + t)  # sigmoid(-du), stable
            alpha = D.T @ (sig * (halfc - sg))
            model.params = model.params - cfg.learning_rate * _backprop(model, Z, H, alpha)
    else:
        def full_loss() -> float:
            u, _ = _forward(model, Z)
            return float(_pair_losses(model, u, ii, jj, cc).sum())

        best_loss = full_loss()
        best_params = model.params.copy()
        for _ in range(cfg.epochs):
            order = shuffle_rng.permutation(n_pairs)
            for s in range(0, n_pairs, batch):
                sl = order[s:s + batch]
                u, H = _forward(model, Z)
                lam = _lambdas(model, u, ii[sl], jj[sl], cc[sl])
                alpha = np.bincount(ii[sl], weights=lam, minlength=n_unique) - np.bincount(
                    jj[sl], weights=lam, minlength=n_unique)
                model.params = model.params - cfg.learning_rate * _backprop(model, Z, H, alpha)
            loss = full_loss()
            if loss < best_loss:
                best_loss = loss
                best_params = model.params.copy()
    model.params = best_params
    return model
