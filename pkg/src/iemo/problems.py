"""Scalable multi-objective benchmark problems.

Implemented families (all minimization, box-constrained):

* ``dtlz1`` .. ``dtlz6``      classic DTLZ suite (Deb, Thiele, Laumanns, Zitzler).
* ``dtlz1inv`` .. ``dtlz4inv`` objective-wise negated variants ("minus" problems,
  Ishibuchi et al.): f(x) is replaced by -f(x), which turns the front inside out
  and places it at the maximum of the distance function.
* ``mdtlz1`` .. ``mdtlz4``    inverted-shape variants with one distance function
  per objective over disjoint variable groups, so that boundary solutions are
  hard to dominate.  Three objectives only.
* ``wfg3``                    the degenerate linear-front WFG problem (Huband et
  al.); the reference front used here is the conventional one-dimensional
  segment obtained by fixing the second and later position parameters at 0.5.

Position variables come first, distance variables second.  The Pareto front
samplers draw position variables uniformly at random and push them through the
front parameterization, so the returned points are exactly on the front (for
``wfg3`` exactly on the reference segment).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

ObjectiveVector = np.ndarray

FAMILIES = (
    "dtlz1", "dtlz2", "dtlz3", "dtlz4", "dtlz5", "dtlz6",
    "dtlz1inv", "dtlz2inv", "dtlz3inv", "dtlz4inv",
    "mdtlz1", "mdtlz2", "mdtlz3", "mdtlz4",
    "wfg3",
)

_MDTLZ_FAMILIES = ("mdtlz1", "mdtlz2", "mdtlz3", "mdtlz4")


class ProblemError(ValueError):
    """Raised for unknown families, bad dimensions or out-of-bounds inputs."""


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Fully resolved problem instance: family, objective count, variable bounds."""

    family: str
    m: int
    n: int
    lower: np.ndarray
    upper: np.ndarray

    @property
    def n_position(self) -> int:
        if self.family == "wfg3":
            return 2 * (self.m - 1)
        return self.m - 1


@dataclass(frozen=True)
class ProblemMeta:
    """Analytic ideal/nadir of the true front (reference segment for wfg3)."""

    ideal: np.ndarray
    nadir: np.ndarray


def make_problem(family: str, m: int, n: int | None = None) -> ProblemSpec:
    """Build a ProblemSpec with the default dimension conventions.

    Defaults: n = m + 4 for dtlz1/dtlz1inv/mdtlz1, n = m + 9 for the other
    DTLZ-shaped families, and k = 2(m - 1), l = 20 for wfg3.  The mdtlz family
    is defined for three objectives only.
    """
    family = family.lower()
    if family not in FAMILIES:
        raise ProblemError(f"unknown problem family: {family!r}")
    if m < 2:
        raise ProblemError("need at least two objectives")
    if family in _MDTLZ_FAMILIES and m != 3:
        raise ProblemError(f"{family} is defined for m = 3 only, got m = {m}")

    if family == "wfg3":
        k = 2 * (m - 1)
        if n is None:
            n = k + 20
        l = n - k
        if l < 2 or l % 2 != 0:
            raise ProblemError(
                f"wfg3 needs an even positive number of distance variables, "
                f"got n = {n} with k = {k}"
            )
        lower = np.zeros(n)
        upper = 2.0 * np.arange(1, n + 1, dtype=float)
        return ProblemSpec(family, m, n, lower, upper)

    if n is None:
        n = m + 4 if family in ("dtlz1", "dtlz1inv", "mdtlz1") else m + 9
    if n < m:
        raise ProblemError(f"need n >= m, got n = {n}, m = {m}")
    return ProblemSpec(family, m, n, np.zeros(n), np.ones(n))


# ---------------------------------------------------------------------------
# distance functions

def _g_rastrigin(Z: np.ndarray) -> np.ndarray:
    y = Z - 0.5
    k = Z.shape[1]
    return 100.0 * (k + np.sum(y * y - np.cos(20.0 * math.pi * y), axis=1))


def _g_sphere(Z: np.ndarray) -> np.ndarray:
    y = Z - 0.5
    return np.sum(y * y, axis=1)


def _g_tenth_power(Z: np.ndarray) -> np.ndarray:
    return np.sum(Z ** 0.1, axis=1)


@functools.lru_cache(maxsize=1)
def _rastrigin_peak() -> tuple[float, float]:
    """Maximizer and maximum of y^2 - cos(20 pi y) on [-0.5, 0.5].

    The peak sits just above y = 0.45 where the cosine trough nearest the
    boundary meets the quadratic term; located by bisection on the derivative.
    """
    def dh(y: float) -> float:
        return 2.0 * y + 20.0 * math.pi * math.sin(20.0 * math.pi * y)

    lo, hi = 0.45, 0.4505
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dh(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    y = 0.5 * (lo + hi)
    return y, y * y - math.cos(20.0 * math.pi * y)


def _g_max(family: str, k: int) -> float:
    """Maximum of the distance function over the box (minus-family fronts)."""
    if family in ("dtlz1inv", "dtlz3inv"):
        return 100.0 * k * (1.0 + _rastrigin_peak()[1])
    return 0.25 * k  # quadratic g, maximized at the box corners


# ---------------------------------------------------------------------------
# shape functions

def _simplex_shape(P: np.ndarray) -> np.ndarray:
    """DTLZ1-style linear shapes h(P), rows sum to one.  P is (N, m-1)."""
    N, mm1 = P.shape
    m = mm1 + 1
    H = np.empty((N, m))
    cp = np.cumprod(P, axis=1)
    H[:, 0] = cp[:, -1]
    for j in range(2, m):
        H[:, j - 1] = cp[:, m - j - 1] * (1.0 - P[:, m - j])
    H[:, m - 1] = 1.0 - P[:, 0]
    return H


def _sphere_shape(T: np.ndarray) -> np.ndarray:
    """DTLZ2-style shapes from angles T (radians), rows on the unit sphere."""
    N, mm1 = T.shape
    m = mm1 + 1
    c = np.cos(T)
    s = np.sin(T)
    H = np.empty((N, m))
    cp = np.cumprod(c, axis=1)
    H[:, 0] = cp[:, -1]
    for j in range(2, m):
        H[:, j - 1] = cp[:, m - j - 1] * s[:, m - j]
    H[:, m - 1] = s[:, 0]
    return H


def _mdtlz_groups(spec: ProblemSpec) -> list[np.ndarray]:
    """Disjoint distance-variable index groups, one per objective."""
    return [np.asarray(g) for g in
            np.array_split(np.arange(spec.m - 1, spec.n), spec.m)]


# ---------------------------------------------------------------------------
# evaluation

def evaluate_batch(spec: ProblemSpec, X: np.ndarray) -> np.ndarray:
    """Evaluate a (N, n) batch of decision vectors, returning (N, m) objectives."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.n:
        raise ProblemError(
            f"expected decision vectors of dimension {spec.n}, got shape {X.shape}"
        )
    bad = (X < spec.lower) | (X > spec.upper)
    if bad.any():
        i = int(np.argwhere(bad.any(axis=0))[0][0])
        raise ProblemError(f"variable {i} out of bounds [{spec.lower[i]}, {spec.upper[i]}]")

    m = spec.m
    if spec.family == "wfg3":
        return _wfg3_eval(spec, X)

    P = X[:, : m - 1]
    Z = X[:, m - 1:]

    if spec.family in _MDTLZ_FAMILIES:
        return _mdtlz_eval(spec, P, X)

    if spec.family in ("dtlz1", "dtlz1inv"):
        g = _g_rastrigin(Z)
        F = 0.5 * (1.0 + g)[:, None] * _simplex_shape(P)
    elif spec.family in ("dtlz2", "dtlz2inv"):
        g = _g_sphere(Z)
        F = (1.0 + g)[:, None] * _sphere_shape(P * (math.pi / 2.0))
    elif spec.family in ("dtlz3", "dtlz3inv"):
        g = _g_rastrigin(Z)
        F = (1.0 + g)[:, None] * _sphere_shape(P * (math.pi / 2.0))
    elif spec.family in ("dtlz4", "dtlz4inv"):
        g = _g_sphere(Z)
        F = (1.0 + g)[:, None] * _sphere_shape((P ** 100.0) * (math.pi / 2.0))
    elif spec.family in ("dtlz5", "dtlz6"):
        g = _g_sphere(Z) if spec.family == "dtlz5" else _g_tenth_power(Z)
        T = np.empty_like(P)
        T[:, 0] = P[:, 0] * (math.pi / 2.0)
        if m > 2:
            # later angles are squeezed toward pi/4 as g shrinks (degenerate front)
            T[:, 1:] = (math.pi / (4.0 * (1.0 + g)))[:, None] * (1.0 + 2.0 * g[:, None] * P[:, 1:])
        F = (1.0 + g)[:, None] * _sphere_shape(T)
    else:  # pragma: no cover
        raise ProblemError(f"unknown problem family: {spec.family!r}")

    if spec.family.endswith("inv"):
        F = -F
    return F


def _mdtlz_eval(spec: ProblemSpec, P: np.ndarray, X: np.ndarray) -> np.ndarray:
    if spec.family == "mdtlz4":
        H = _sphere_shape((P ** 100.0) * (math.pi / 2.0))
    elif spec.family == "mdtlz1":
        H = _simplex_shape(P)
    else:
        H = _sphere_shape(P * (math.pi / 2.0))

    G = np.empty((X.shape[0], spec.m))
    for i, idx in enumerate(_mdtlz_groups(spec)):
        Z = X[:, idx]
        if spec.family in ("mdtlz1", "mdtlz3"):
            G[:, i] = _g_rastrigin(Z)
        else:
            G[:, i] = _g_sphere(Z)

    scale = 0.5 if spec.family == "mdtlz1" else 1.0
    return scale * (1.0 + G) * (1.0 - H)


def _wfg3_eval(spec: ProblemSpec, X: np.ndarray) -> np.ndarray:
    m = spec.m
    k = spec.n_position
    n = spec.n
    y = X / (2.0 * np.arange(1, n + 1, dtype=float))

    # t1: shift distance parameters toward their optimum at 0.35
    d = y[:, k:]
    y = np.concatenate(
        [y[:, :k], np.abs(d - 0.35) / np.abs(np.floor(0.35 - d) + 0.35)], axis=1
    )
    # t2: non-separable pairwise reduction of the distance parameters
    a = y[:, k:n:2]
    b = y[:, k + 1:n:2]
    red = (a + b + 2.0 * np.abs(a - b)) / 3.0
    # t3: mean reduction to m-1 position parameters and one distance parameter
    per = k // (m - 1)
    t = np.empty((X.shape[0], m))
    for i in range(m - 1):
        t[:, i] = y[:, i * per:(i + 1) * per].mean(axis=1)
    t[:, m - 1] = red.mean(axis=1)

    # degeneracy constants A_1 = 1, A_i = 0 collapse the middle parameters
    x = np.empty_like(t)
    x[:, 0] = np.maximum(t[:, m - 1], 1.0) * (t[:, 0] - 0.5) + 0.5
    for i in range(1, m - 1):
        x[:, i] = np.maximum(t[:, m - 1], 0.0) * (t[:, i] - 0.5) + 0.5
    x[:, m - 1] = t[:, m - 1]

    H = _simplex_shape(x[:, : m - 1])
    S = 2.0 * np.arange(1, m + 1, dtype=float)
    return x[:, [m - 1]] + S[None, :] * H


def evaluate(spec: ProblemSpec, x: np.ndarray) -> np.ndarray:
    """Evaluate a single decision vector."""
    return evaluate_batch(spec, np.asarray(x, dtype=float)[None, :])[0]


# ---------------------------------------------------------------------------
# front geometry

def _wfg3_segment_coeffs(m: int) -> np.ndarray:
    """f_j = c_j * t on the reference segment (j < m); f_m = 2m (1 - t)."""
    c = np.empty(m - 1)
    c[0] = 2.0 * 0.5 ** (m - 2)
    for j in range(2, m):
        c[j - 1] = 2.0 * j * 0.5 ** (m - j)
    return c


def _dtlz5_coeffs(m: int) -> np.ndarray:
    """f_j = a_j cos(theta) on the degenerate curve (j < m); f_m = sin(theta)."""
    r = math.sqrt(0.5)
    a = np.empty(m - 1)
    a[0] = r ** (m - 2)
    for j in range(2, m):
        a[j - 1] = r ** (m - j)
    return a


def sample_pf(spec: ProblemSpec, count: int, seed: int = 0) -> np.ndarray:
    """Draw `count` points from the true front via random position variables."""
    if count < 1:
        raise ProblemError("count must be positive")
    rng = np.random.default_rng(seed)
    m = spec.m
    fam = spec.family

    if fam in ("dtlz1", "dtlz1inv"):
        F = 0.5 * _simplex_shape(rng.random((count, m - 1)))
    elif fam in ("dtlz2", "dtlz3", "dtlz2inv", "dtlz3inv"):
        F = _sphere_shape(rng.random((count, m - 1)) * (math.pi / 2.0))
    elif fam in ("dtlz4", "dtlz4inv"):
        F = _sphere_shape((rng.random((count, m - 1)) ** 100.0) * (math.pi / 2.0))
    elif fam in ("dtlz5", "dtlz6"):
        T = np.full((count, m - 1), math.pi / 4.0)
        T[:, 0] = rng.random(count) * (math.pi / 2.0)
        F = _sphere_shape(T)
    elif fam == "mdtlz1":
        F = 0.5 * (1.0 - _simplex_shape(rng.random((count, m - 1))))
    elif fam == "mdtlz4":
        F = 1.0 - _sphere_shape((rng.random((count, m - 1)) ** 100.0) * (math.pi / 2.0))
    elif fam in ("mdtlz2", "mdtlz3"):
        F = 1.0 - _sphere_shape(rng.random((count, m - 1)) * (math.pi / 2.0))
    elif fam == "wfg3":
        t = rng.random(count)
        F = np.empty((count, m))
        F[:, : m - 1] = t[:, None] * _wfg3_segment_coeffs(m)[None, :]
        F[:, m - 1] = 2.0 * m * (1.0 - t)
        return F
    else:  # pragma: no cover
        raise ProblemError(f"unknown problem family: {fam!r}")

    if fam.endswith("inv"):
        F = -(1.0 + _g_max(fam, spec.n - m + 1)) * F
    return F


def golden_point(spec: ProblemSpec, w_star: np.ndarray) -> np.ndarray:
    """Front point minimizing max_i |f_i| / w_i (reference at the origin).

    Closed forms throughout: balanced points on simplex/sphere fronts, a
    crossing-point solve on the degenerate dtlz5/6 and wfg3 segments, and a
    monotone bisection for the clamped inverted fronts of the mdtlz family.
    """
    w = np.asarray(w_star, dtype=float)
    if w.shape != (spec.m,):
        raise ProblemError(f"weight vector must have {spec.m} components")
    if np.any(w <= 0.0):
        raise ProblemError("golden point needs strictly positive weights")
    m = spec.m
    fam = spec.family
    k = spec.n - m + 1

    if fam == "dtlz1":
        return 0.5 * w / w.sum()
    if fam in ("dtlz2", "dtlz3", "dtlz4"):
        return w / math.sqrt(float(w @ w))
    if fam in ("dtlz5", "dtlz6"):
        a = _dtlz5_coeffs(m)
        A = float(np.max(a / w[: m - 1]))
        B = 1.0 / w[m - 1]
        theta = math.atan2(A, B)
        f = np.empty(m)
        f[: m - 1] = a * math.cos(theta)
        f[m - 1] = math.sin(theta)
        return f
    if fam == "dtlz1inv":
        return -(1.0 + _g_max(fam, k)) * 0.5 * w / w.sum()
    if fam in ("dtlz2inv", "dtlz3inv", "dtlz4inv"):
        return -(1.0 + _g_max(fam, k)) * w / math.sqrt(float(w @ w))
    if fam == "mdtlz1":
        # f_i = min(c w_i, 1/2) on the inverted simplex, sum must reach 1
        def shortfall(c: float) -> float:
            return float(np.minimum(c * w, 0.5).sum()) - 1.0
        return np.minimum(_bisect_increasing(shortfall, 0.0, float(np.max(1.0 / w))) * w, 0.5)
    if fam in _MDTLZ_FAMILIES:
        # f_i = min(c w_i, 1) on the inverted sphere, sum (1 - f_i)^2 must drop to 1
        def excess(c: float) -> float:
            r = np.maximum(1.0 - c * w, 0.0)
            return 1.0 - float(r @ r)
        return np.minimum(_bisect_increasing(excess, 0.0, float(np.max(1.0 / w))) * w, 1.0)
    if fam == "wfg3":
        c = _wfg3_segment_coeffs(m)
        A = float(np.max(c / w[: m - 1]))
        B = 2.0 * m / w[m - 1]
        t = B / (A + B)
        f = np.empty(m)
        f[: m - 1] = c * t
        f[m - 1] = 2.0 * m * (1.0 - t)
        return f
    raise ProblemError(f"golden point unsupported for family: {fam!r}")


def _bisect_increasing(fn, lo: float, hi: float, iters: int = 200) -> float:
    while fn(hi) < 0.0:
        hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def problem_meta(spec: ProblemSpec) -> ProblemMeta:
    """Ideal and nadir of the true front (reference segment for wfg3)."""
    m = spec.m
    fam = spec.family
    k = spec.n - m + 1
    if fam == "dtlz1":
        return ProblemMeta(np.zeros(m), np.full(m, 0.5))
    if fam in ("dtlz2", "dtlz3", "dtlz4"):
        return ProblemMeta(np.zeros(m), np.ones(m))
    if fam in ("dtlz5", "dtlz6"):
        nadir = np.empty(m)
        nadir[: m - 1] = _dtlz5_coeffs(m)
        nadir[m - 1] = 1.0
        return ProblemMeta(np.zeros(m), nadir)
    if fam == "dtlz1inv":
        lo = -0.5 * (1.0 + _g_max(fam, k))
        return ProblemMeta(np.full(m, lo), np.zeros(m))
    if fam in ("dtlz2inv", "dtlz3inv", "dtlz4inv"):
        lo = -(1.0 + _g_max(fam, k))
        return ProblemMeta(np.full(m, lo), np.zeros(m))
    if fam == "mdtlz1":
        return ProblemMeta(np.zeros(m), np.full(m, 0.5))
    if fam in _MDTLZ_FAMILIES:
        return ProblemMeta(np.zeros(m), np.ones(m))
    if fam == "wfg3":
        nadir = np.empty(m)
        nadir[: m - 1] = _wfg3_segment_coeffs(m)
        nadir[m - 1] = 2.0 * m
        return ProblemMeta(np.zeros(m), nadir)
    raise ProblemError(f"unknown problem family: {fam!r}")
