"""Discrete self-expanding (DSE) spaces.

A DSE space is an ordered finite metric space x_1, ..., x_n in which the
distance from any point to later points never decreases:

    d(x_i, x_j) <= d(x_i, x_k)   for all i <= j <= k.

They arise by reversing the sample order of self-contracted curves.  The two
functionals of interest are the chain length L = sum d(x_i, x_i+1) and the gap
D = d(x_1, x_n); the snowflaked path family below realizes arbitrarily large
L/D ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metric_core import (
    EUCLIDEAN_L2,
    FiniteMetricSpace,
    ModelSpaceSpec,
    default_tol,
    diameter,
    from_point_cloud,
    sample_model,
    snowflake,
)


class RejectionError(RuntimeError):
    """Raised when rejection sampling exhausts its attempt budget."""


@dataclass(frozen=True)
class DseViolation:
    i: int
    j: int
    k: int
    amount: float  # d(i,j) - d(i,k) > tol


@dataclass(frozen=True)
class DseVerdict:
    ok: bool
    violations: tuple[DseViolation, ...]
    tol: float
    truncated: bool = False


@dataclass(frozen=True)
class DseSpace:
    """A FiniteMetricSpace whose identity index order satisfies the DSE
    monotonicity.  Use :func:`as_dse` to build one with verification."""

    space: FiniteMetricSpace

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dist(self) -> np.ndarray:
        return self.space.dist


def is_dse(m: FiniteMetricSpace, tol: Optional[float] = None,
           max_violations: int = 1000) -> DseVerdict:
    """Check d(x_i, x_j) <= d(x_i, x_k) + tol for all i <= j <= k."""
    if tol is None:
        tol = default_tol(m)
    d = m.dist
    n = m.n
    out: list[DseViolation] = []
    truncated = False
    for i in range(n):
        row = d[i, i:]
        prefix_max = np.maximum.accumulate(row)
        bad = np.nonzero(row < prefix_max - tol)[0]
        if bad.size == 0:
            continue
        # Expand the cheap row check into explicit witness triples.
        for rk in bad:
            k = i + int(rk)
            j = i + int(np.argmax(row[: rk + 1]))
            if len(out) >= max_violations:
                truncated = True
                break
            out.append(DseViolation(i, j, k, float(d[i, j] - d[i, k])))
        if truncated:
            break
    return DseVerdict(ok=not out, violations=tuple(out), tol=float(tol), truncated=truncated)


def as_dse(m: FiniteMetricSpace, tol: Optional[float] = None) -> DseSpace:
    verdict = is_dse(m, tol=tol)
    if not verdict.ok:
        v = verdict.violations[0]
        raise ValueError(
            f"order is not DSE: d(x{v.i},x{v.j})={m.dist[v.i, v.j]:.6g} exceeds "
            f"d(x{v.i},x{v.k})={m.dist[v.i, v.k]:.6g}"
        )
    return DseSpace(m)


def length_L(d: DseSpace) -> float:
    """Sum of consecutive distances along the order."""
    dist = d.dist
    return float(sum(dist[i, i + 1] for i in range(d.n - 1)))


def gap_D(d: DseSpace) -> float:
    """Distance between the first and the last point."""
    return float(d.dist[0, d.n - 1])


@dataclass(frozen=True)
class TwoLemmaVerdict:
    ok: bool
    worst: Optional[tuple[int, int, int, int]]
    worst_ratio: float  # max of d(x_j,x_k) / (2 d(x_i,x_l)) over i<=j<=k<=l
    diam_le_two_gap: bool


def check_two_lemma(d: DseSpace, tol: Optional[float] = None) -> TwoLemmaVerdict:
    """Verify d(x_j, x_k) <= 2 d(x_i, x_l) for all i <= j <= k <= l, plus the
    consequence diam <= 2 D.  A failure here means the order was not DSE.
    """
    if tol is None:
        tol = default_tol(d.space)
    dist = d.dist
    n = d.n
    if n == 1:
        return TwoLemmaVerdict(True, None, 0.0, True)
    # inner_max[i][l] = max distance within the index window [i..l].
    inner_max = np.zeros((n, n))
    for i in range(n - 2, -1, -1):
        for l in range(i + 1, n):
            inner_max[i, l] = max(inner_max[i + 1, l] if i + 1 <= l else 0.0,
                                  inner_max[i, l - 1] if l - 1 >= i else 0.0,
                                  dist[i, l])
    ok = True
    worst = None
    worst_ratio = 0.0
    for i in range(n):
        for l in range(i + 1, n):
            bound = 2.0 * dist[i, l]
            ratio = inner_max[i, l] / bound if bound > 0 else np.inf
            if ratio > worst_ratio:
                worst_ratio = ratio
                worst = (i, -1, -1, l)
            if inner_max[i, l] > bound + tol:
                ok = False
    if worst is not None:
        i, _, _, l = worst
        sub = dist[i:l + 1, i:l + 1]
        j, k = np.unravel_index(int(np.argmax(sub)), sub.shape)
        worst = (i, i + int(min(j, k)), i + int(max(j, k)), l)
    if ok:
        worst = None
    diam_ok = diameter(d.space) <= 2.0 * gap_D(d) + tol
    return TwoLemmaVerdict(ok=ok and diam_ok, worst=worst,
                           worst_ratio=float(worst_ratio), diam_le_two_gap=diam_ok)


def gen_snowflaked_path(n: int, beta: float) -> DseSpace:
    """Snowflake of n equally spaced collinear points: d(i,j) = |i-j|^beta.

    The canonical family with unbounded chain-to-gap ratio:
    L/D = (n-1)^(1-beta).  DSE in index order because t -> t^beta is monotone.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    positions = np.arange(n, dtype=np.float64)
    base = FiniteMetricSpace(np.abs(positions[:, None] - positions[None, :]))
    return as_dse(snowflake(base, beta))


def gen_random_dse(
    n: int,
    seed: int,
    model: Optional[ModelSpaceSpec] = None,
    max_attempts: int = 100_000,
) -> DseSpace:
    """Rejection-sample a DSE ordering of model-space clouds.

    Deterministic per seed.  Each attempt draws a fresh cloud and tries the
    identity order, the order sorted by distance from the first point, and a
    batch of random permutations; DSE orders are rare in generic clouds, so
    the attempt budget is explicit and exhaustion raises RejectionError.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if model is None:
        model = ModelSpaceSpec(EUCLIDEAN_L2, 2)
    rng = np.random.default_rng(seed)
    attempts = 0
    perms_per_cloud = max(8, 4 * n)
    while attempts < max_attempts:
        cloud_seed = int(rng.integers(0, 2**31 - 1))
        cloud = sample_model(model, n, radius=1.0, seed=cloud_seed)
        space = from_point_cloud(cloud)
        d = space.dist
        candidates = [np.arange(n), np.argsort(d[0], kind="stable")]
        while len(candidates) < perms_per_cloud:
            candidates.append(rng.permutation(n))
        for perm in candidates:
            attempts += 1
            reordered = d[np.ix_(perm, perm)]
            cand = FiniteMetricSpace(reordered)
            if is_dse(cand).ok:
                return DseSpace(cand)
            if attempts >= max_attempts:
                break
    raise RejectionError(f"no DSE ordering found within {max_attempts} attempts")
