"""Deciding the SRA(alpha) condition and hunting maximal SRA(alpha) subspaces.

A finite metric space satisfies SRA(alpha), "small rough angles", when every
ordered triple (x, z, y) of distinct points obeys

    d(x,y) <= max{ d(x,z) + alpha * d(z,y),  alpha * d(x,z) + d(z,y) }.

The inequality is symmetric in x and y, so triples are enumerated with x < y
and every distinct middle z.  Violating unordered triples form a 3-uniform
hypergraph; a subset is SRA(alpha) exactly when it spans no violating triple,
which turns maximum-subspace search into a maximum independent set problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _hypergraph
from .metric_core import (
    EUCLIDEAN_L2,
    FiniteMetricSpace,
    PointCloud,
    default_tol,
    from_point_cloud,
    subspace,
)


@dataclass(frozen=True)
class TripleViolation:
    x: int
    z: int
    y: int
    slack: float  # d(x,y) - max{d(x,z)+a*d(z,y), a*d(x,z)+d(z,y)} > tol


@dataclass(frozen=True)
class SraVerdict:
    alpha: float
    is_sra: bool
    violations: tuple[TripleViolation, ...]
    tol: float
    truncated: bool = False


@dataclass(frozen=True)
class SubsetCertificate:
    alpha: float
    subset: tuple[int, ...]
    size: int
    optimal: bool
    bound: int  # best proven upper bound on the maximum size


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")


def _slack_for_middle(d: np.ndarray, z: int, alpha: float) -> np.ndarray:
    """Matrix S with S[x,y] = d(x,y) - max{d(x,z)+a*d(z,y), a*d(x,z)+d(z,y)}."""
    col = d[:, z]
    m1 = col[:, None] + alpha * col[None, :]
    allowed = np.maximum(m1, m1.T)
    return d - allowed


def is_sra(
    m: FiniteMetricSpace,
    alpha: float,
    tol: Optional[float] = None,
    max_violations: int = 10_000,
) -> SraVerdict:
    """Decide SRA(alpha) over all distinct triples; a triple is recorded as a
    violation when its slack exceeds ``tol``."""
    _check_alpha(alpha)
    if tol is None:
        tol = default_tol(m)
    d = m.dist
    n = m.n
    out: list[TripleViolation] = []
    truncated = False
    for z in range(n):
        slack = _slack_for_middle(d, z, alpha)
        xs, ys = np.nonzero(np.triu(slack > tol, 1))
        for x, y in zip(xs, ys):
            if x == z or y == z:
                continue
            if len(out) >= max_violations:
                truncated = True
                break
            out.append(TripleViolation(int(x), int(z), int(y), float(slack[x, y])))
        if truncated:
            break
    return SraVerdict(alpha=float(alpha), is_sra=not out, violations=tuple(out),
                      tol=float(tol), truncated=truncated)


def critical_alpha(m: FiniteMetricSpace) -> float:
    """Smallest alpha at which every triple passes, clamped below at 0.

    Per triple (x, z, y) the inequality holds iff alpha is at least

        min{ (d(x,y)-d(x,z))/d(z,y),  (d(x,y)-d(z,y))/d(x,z) },

    so the space-wide critical value is the maximum of that expression over
    distinct triples.  Can exceed 1 (e.g. collinear configurations); for all
    alpha' >= critical the space is SRA(alpha') at tol 0.
    """
    n = m.n
    if n <= 2:
        return 0.0
    d = m.dist
    worst = 0.0
    idx = np.arange(n)
    for z in range(n):
        col = d[:, z]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (d - col[:, None]) / col[None, :]
        need = np.minimum(ratio, ratio.T)
        need[idx == z, :] = -np.inf
        need[:, idx == z] = -np.inf
        np.fill_diagonal(need, -np.inf)
        val = float(np.max(need))
        if val > worst:
            worst = val
    return worst


def violating_triples(
    m: FiniteMetricSpace, alpha: float, tol: Optional[float] = None
) -> list[tuple[int, int, int]]:
    """Unordered triples {a,b,c} that violate SRA(alpha) for at least one
    choice of middle point.  These are the hyperedges of the freeness search."""
    _check_alpha(alpha)
    if tol is None:
        tol = default_tol(m)
    d = m.dist
    n = m.n
    edges: set[tuple[int, int, int]] = set()
    for z in range(n):
        slack = _slack_for_middle(d, z, alpha)
        xs, ys = np.nonzero(np.triu(slack > tol, 1))
        for x, y in zip(xs, ys):
            if x == z or y == z:
                continue
            edges.add(tuple(sorted((int(x), int(z), int(y)))))
    return sorted(edges)


def max_sra_subset(
    m: FiniteMetricSpace,
    alpha: float,
    budget: Optional[int] = 500_000,
    tol: Optional[float] = None,
) -> SubsetCertificate:
    """Exact maximum SRA(alpha) subspace via branch and bound on the violating
    triple hypergraph.  On budget exhaustion the best subset found so far is
    returned with ``optimal=False`` and a proven upper bound.

    Among equal-size optima the lexicographically smallest subset is returned,
    so certificates are reproducible.
    """
    _check_alpha(alpha)
    edges = violating_triples(m, alpha, tol=tol)
    res = _hypergraph.max_independent_subset(m.n, edges, budget=budget)
    subset = res.subset
    if res.optimal and res.size < m.n:
        subset = _hypergraph.lexicographically_smallest_mis(m.n, edges, res.size, budget=budget)
    return SubsetCertificate(alpha=float(alpha), subset=subset, size=res.size,
                             optimal=res.optimal, bound=res.upper_bound)


def sra_free_order(
    m: FiniteMetricSpace, alpha: float, budget: Optional[int] = 500_000
) -> Optional[int]:
    """Least k such that no k-point subspace is SRA(alpha): maximum size + 1.

    Returns None when the exact search exhausts its budget; never guesses.
    """
    cert = max_sra_subset(m, alpha, budget=budget)
    if not cert.optimal:
        return None
    return cert.size + 1


# ----------------------------------------------------------------------------
# Euclidean angle audit
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AngleAuditEntry:
    x: int
    z: int
    y: int
    angle: float


@dataclass(frozen=True)
class AngleAudit:
    alpha: float
    threshold: float  # arccos(-alpha)
    entries: tuple[AngleAuditEntry, ...]
    skipped_degenerate: tuple[tuple[int, int], ...]
    boundary_dropped: int


def euclidean_angle_audit(pc: PointCloud, alpha: float) -> AngleAudit:
    """Triples of a Euclidean cloud whose vertex angle at the middle point
    exceeds arccos(-alpha).

    Every returned triple is cross-checked to violate SRA(alpha) on the
    induced metric, which is what a wide angle forces: cos(angle) < -alpha
    gives d(x,y)^2 > d(x,z)^2 + d(z,y)^2 + 2*alpha*d(x,z)*d(z,y), which
    strictly dominates both branches of the SRA bound.  Numerically boundary
    triples that fail the cross-check are dropped and counted.
    """
    _check_alpha(alpha)
    if pc.model.kind != EUCLIDEAN_L2:
        raise ValueError("angle audit requires the euclidean-l2 model")
    threshold = math.acos(-alpha)
    coords = pc.coords
    n = pc.n
    entries: list[AngleAuditEntry] = []
    skipped: list[tuple[int, int]] = []
    dropped = 0

    diff_all = coords[:, None, :] - coords[None, :, :]
    dmat = np.sqrt(np.sum(diff_all * diff_all, axis=2))

    for z in range(n):
        v = coords - coords[z]
        norms = np.linalg.norm(v, axis=1)
        for x in range(n):
            if x == z:
                continue
            if norms[x] <= 1e-12:
                skipped.append((x, z))
                continue
            for y in range(x + 1, n):
                if y == z or norms[y] <= 1e-12:
                    continue
                cosang = float(np.dot(v[x], v[y]) / (norms[x] * norms[y]))
                ang = math.acos(min(1.0, max(-1.0, cosang)))
                if ang <= threshold:
                    continue
                a, b = dmat[x, z], dmat[z, y]
                slack = dmat[x, y] - max(a + alpha * b, alpha * a + b)
                if slack <= 0.0:
                    dropped += 1
                    continue
                entries.append(AngleAuditEntry(x, z, y, ang))
    # Deduplicate degenerate notices and keep output order stable.
    seen = sorted(set(skipped))
    return AngleAudit(alpha=float(alpha), threshold=threshold, entries=tuple(entries),
                      skipped_degenerate=tuple(seen), boundary_dropped=dropped)


def sra_report(
    m: FiniteMetricSpace,
    alpha: float,
    budget: Optional[int] = 500_000,
    tol: Optional[float] = None,
) -> dict:
    """Combined JSON-ready report: verdict, critical alpha, max subset."""
    verdict = is_sra(m, alpha, tol=tol)
    cert = max_sra_subset(m, alpha, budget=budget, tol=tol)
    return {
        "alpha": float(alpha),
        "is_sra": verdict.is_sra,
        "critical_alpha": critical_alpha(m),
        "max_subset": {
            "indices": list(cert.subset),
            "size": cert.size,
            "optimal": cert.optimal,
            "bound": cert.bound,
        },
        "violations": [
            {"x": v.x, "z": v.z, "y": v.y, "slack": v.slack} for v in verdict.violations
        ],
        "tol": verdict.tol,
    }
