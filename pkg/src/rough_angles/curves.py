"""Self-contracted curves at desk scale.

A sampled curve gamma is self-contracted when

    d(gamma(t2), gamma(t3)) <= d(gamma(t1), gamma(t3))   for t1 <= t2 <= t3:

the curve keeps approaching every later point.  Gradient descent on a
positive-definite quadratic with step <= 1/lambda_max produces exactly such
polylines, and reversing the sample order of any self-contracted curve yields
a DSE space (the same inequalities read backwards).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dse_spaces import DseSpace, as_dse
from .metric_core import (
    EUCLIDEAN_L2,
    FiniteMetricSpace,
    ModelSpaceSpec,
    PointCloud,
    _pairwise,
)


class DivergenceError(RuntimeError):
    """Raised when a generated trajectory stops decreasing its objective."""


@dataclass(frozen=True)
class SampledCurve:
    model: ModelSpaceSpec
    times: np.ndarray
    points: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64)
        p = np.asarray(self.points, dtype=np.float64)
        if t.ndim != 1:
            raise ValueError("times must be one-dimensional")
        if p.ndim != 2 or p.shape[0] != t.shape[0]:
            raise ValueError("points must be a (len(times), arity) array")
        if t.shape[0] < 1:
            raise ValueError("need at least one sample")
        if t.shape[0] >= 2 and np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        # Route coordinate validation through PointCloud.
        PointCloud(self.model, p)
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "points", p)

    @property
    def n(self) -> int:
        return self.times.shape[0]


def _curve_distances(c: SampledCurve) -> np.ndarray:
    return _pairwise(c.model, c.points)


@dataclass(frozen=True)
class ContractionViolation:
    t1: float
    t2: float
    t3: float
    indices: tuple[int, int, int]
    amount: float  # d(g(t2),g(t3)) - d(g(t1),g(t3)) > tol


@dataclass(frozen=True)
class ContractionVerdict:
    ok: bool
    violations: tuple[ContractionViolation, ...]
    tol: float
    truncated: bool = False


def is_self_contracted(c: SampledCurve, tol: Optional[float] = None,
                       max_violations: int = 1000) -> ContractionVerdict:
    """Check all sample-time triples t1 <= t2 <= t3.

    Equivalent formulation used here: for every endpoint k, the distances
    d(gamma(t_i), gamma(t_k)) for i <= k never rise above an earlier value.
    """
    d = _curve_distances(c)
    n = c.n
    if tol is None:
        tol = 1e-9 * (1.0 + (float(np.max(d)) if n > 1 else 0.0))
    out: list[ContractionViolation] = []
    truncated = False
    for k in range(n - 1, 0, -1):
        col = d[: k + 1, k]
        prefix_min = np.minimum.accumulate(col)
        bad = np.nonzero(col > prefix_min + tol)[0]
        for j in bad:
            i = int(np.argmin(col[: j + 1]))
            if len(out) >= max_violations:
                truncated = True
                break
            out.append(ContractionViolation(
                float(c.times[i]), float(c.times[j]), float(c.times[k]),
                (i, int(j), k), float(col[j] - col[i])))
        if truncated:
            break
    out.sort(key=lambda v: v.indices)
    return ContractionVerdict(ok=not out, violations=tuple(out), tol=float(tol),
                              truncated=truncated)


def curve_length(c: SampledCurve) -> float:
    """Sum of consecutive sample distances (the inscribed polyline length)."""
    if c.n < 2:
        return 0.0
    d = _curve_distances(c)
    return float(sum(d[i, i + 1] for i in range(c.n - 1)))


def curve_diameter(c: SampledCurve) -> float:
    if c.n < 2:
        return 0.0
    return float(np.max(_curve_distances(c)))


def curve_to_dse(c: SampledCurve, tol: Optional[float] = None) -> DseSpace:
    """Reverse the sample order of a self-contracted curve into a DSE space.

    Self-contraction at s1 <= s2 <= s3 says d(g(s2),g(s3)) <= d(g(s1),g(s3));
    after reversal that is literally the DSE monotonicity, so the output
    passes is_dse at the same tolerance.  Repeated sample points (a curve
    that has stalled) are collapsed to a single point.
    """
    verdict = is_self_contracted(c, tol=tol)
    if not verdict.ok:
        v = verdict.violations[0]
        raise ValueError(
            f"curve is not self-contracted: triple t={v.t1:.6g},{v.t2:.6g},{v.t3:.6g} "
            f"exceeds by {v.amount:.3g}"
        )
    d = _curve_distances(c)
    order = list(range(c.n - 1, -1, -1))
    kept: list[int] = []
    for idx in order:
        if any(d[prev, idx] <= 0.0 for prev in kept):
            continue
        kept.append(idx)
    rd = d[np.ix_(kept, kept)]
    return as_dse(FiniteMetricSpace(rd), tol=tol)


# ----------------------------------------------------------------------------
# Trajectory generators (Euclidean)
# ----------------------------------------------------------------------------

def _as_spd(q: Sequence[Sequence[float]]) -> np.ndarray:
    qm = np.asarray(q, dtype=np.float64)
    if qm.ndim != 2 or qm.shape[0] != qm.shape[1]:
        raise ValueError("quadratic matrix must be square")
    if not np.allclose(qm, qm.T, atol=1e-12):
        raise ValueError("quadratic matrix must be symmetric")
    eigs = np.linalg.eigvalsh(qm)
    if np.min(eigs) <= 0.0:
        raise ValueError(f"quadratic matrix must be positive definite, eigs {eigs}")
    return qm


def gen_gradient_trajectory(
    q: Sequence[Sequence[float]],
    start: Sequence[float],
    step: float,
    steps: int,
    model: Optional[ModelSpaceSpec] = None,
) -> SampledCurve:
    """Explicit-Euler polyline of the gradient flow of f(x) = x^T Q x / 2:
    x_{k+1} = x_k - step * Q x_k.

    The objective must not increase at any step; the first offending step
    index is reported otherwise (step too large for the top eigenvalue).
    Distances along the curve are measured in ``model`` (default Euclidean).
    """
    qm = _as_spd(q)
    x = np.asarray(start, dtype=np.float64)
    if x.shape != (qm.shape[0],):
        raise ValueError("start point dimension does not match the matrix")
    if step <= 0.0 or steps < 0:
        raise ValueError("need step > 0 and steps >= 0")
    if model is None:
        model = ModelSpaceSpec(EUCLIDEAN_L2, qm.shape[0])
    pts = [x.copy()]
    f_prev = 0.5 * float(x @ qm @ x)
    for k in range(steps):
        x = x - step * (qm @ x)
        f_next = 0.5 * float(x @ qm @ x)
        if f_next > f_prev:
            raise DivergenceError(
                f"objective increased at step {k + 1}: {f_prev:.6g} -> {f_next:.6g} "
                f"(step {step} too large; stability needs step <= 2/lambda_max)"
            )
        f_prev = f_next
        pts.append(x.copy())
    times = np.arange(steps + 1, dtype=np.float64) * step
    return SampledCurve(model, times, np.asarray(pts))


def gen_quasiconvex_trajectory(
    start: Sequence[float], step: float, steps: int
) -> SampledCurve:
    """Gradient polyline of the quasiconvex (not convex) radial function
    f(x) = |x|^2 / (1 + |x|^2) in Euclidean space.

    The gradient is radial, so the iterates move along a ray toward the
    origin; the per-step shrink factor is verified to stay in [0, 1), which
    makes the polyline monotone on a segment and hence self-contracted.
    """
    x = np.asarray(start, dtype=np.float64)
    if step <= 0.0 or steps < 0:
        raise ValueError("need step > 0 and steps >= 0")
    pts = [x.copy()]
    for k in range(steps):
        s2 = float(x @ x)
        if s2 == 0.0:
            pts.append(x.copy())
            continue
        factor = 1.0 - 2.0 * step / (1.0 + s2) ** 2
        if not (0.0 <= factor < 1.0):
            raise DivergenceError(
                f"step {k + 1} overshoots the origin (shrink factor {factor:.4g}); "
                f"reduce the step below (1+|x|^2)^2 / 2"
            )
        x = factor * x
        pts.append(x.copy())
    times = np.arange(steps + 1, dtype=np.float64) * step
    return SampledCurve(ModelSpaceSpec(EUCLIDEAN_L2, x.shape[0]), times, np.asarray(pts))


def gen_subgradient_trajectory(
    slopes: Sequence[Sequence[float]],
    offsets: Sequence[float],
    start: Sequence[float],
    step: float,
    steps: int,
) -> SampledCurve:
    """Subgradient polyline for the max-affine convex function
    f(x) = max_i (a_i . x + b_i), with diminishing steps step/sqrt(k+1).

    Discrete subgradient steps are only an approximation of the continuous
    dynamics, so no self-contraction is asserted here; measure the output.
    """
    a = np.asarray(slopes, dtype=np.float64)
    b = np.asarray(offsets, dtype=np.float64)
    x = np.asarray(start, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != b.shape[0] or a.shape[1] != x.shape[0]:
        raise ValueError("slopes/offsets/start shapes are inconsistent")
    if step <= 0.0 or steps < 0:
        raise ValueError("need step > 0 and steps >= 0")
    pts = [x.copy()]
    for k in range(steps):
        active = int(np.argmax(a @ x + b))
        g = a[active]
        norm = float(np.linalg.norm(g))
        if norm > 0.0:
            x = x - (step / np.sqrt(k + 1.0)) * g / norm
        pts.append(x.copy())
    times = np.arange(steps + 1, dtype=np.float64) * step
    return SampledCurve(ModelSpaceSpec(EUCLIDEAN_L2, x.shape[0]), times, np.asarray(pts))
