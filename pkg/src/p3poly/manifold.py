"""Projection onto the uncorrelated-behaviour manifold.

In the reduced 8-coordinate representation the behaviours reachable without
any correlation between the two end wings form a 4-parameter surface: the
four marginals (a0, a1, c0, c1) are free in [0, 1] and every composite
coordinate is the product of its marginals.  This module embeds parameter
tuples, tests membership, projects arbitrary points onto the surface by
multi-start projected gradient descent, and turns projection distances into
a normalized nonclassicality score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .strategies import BehaviourPoint, REDUCED_8

_ARMIJO_C = 1e-4
_BACKTRACK = 0.5
_MIN_STEP = 1e-16

# Fixed lattice of optimizer starts (the target's own marginals are always
# appended as a final start).
_LATTICE_STARTS = (
    (0.25, 0.25, 0.25, 0.25),
    (0.50, 0.50, 0.50, 0.50),
    (0.75, 0.75, 0.75, 0.75),
    (0.25, 0.25, 0.75, 0.75),
    (0.75, 0.75, 0.25, 0.25),
    (0.25, 0.75, 0.25, 0.75),
    (0.75, 0.25, 0.75, 0.25),
    (0.25, 0.75, 0.75, 0.25),
    (0.75, 0.25, 0.25, 0.75),
)


@dataclass(frozen=True)
class ManifoldParams:
    """Marginal parameters (a0, a1, c0, c1) of an uncorrelated behaviour."""

    a0: float
    a1: float
    c0: float
    c1: float

    def __post_init__(self) -> None:
        for name in ("a0", "a1", "c0", "c1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"parameter {name}={value} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.c0, self.c1])


def embed(params: ManifoldParams) -> BehaviourPoint:
    """Uncorrelated behaviour point with the given marginals."""
    a0, a1, c0, c1 = params.a0, params.a1, params.c0, params.c1
    return BehaviourPoint.reduced(
        (a0, a1, c0, c1, a0 * c0, a0 * c1, a1 * c0, a1 * c1)
    )


def on_manifold(point: BehaviourPoint, tol: float = 1e-9) -> bool:
    """Whether every composite coordinate equals the product of its marginals."""
    if point.representation != REDUCED_8:
        raise ValueError("manifold membership is defined for reduced-8 points")
    a0, a1, c0, c1 = point.coords[:4]
    products = (a0 * c0, a0 * c1, a1 * c0, a1 * c1)
    return all(abs(x - y) <= tol for x, y in zip(point.coords[4:], products))


def _embed_array(x: np.ndarray) -> np.ndarray:
    a0, a1, c0, c1 = x
    return np.array([a0, a1, c0, c1, a0 * c0, a0 * c1, a1 * c0, a1 * c1])


def projection_objective(x: np.ndarray, target: np.ndarray) -> float:
    """Squared Euclidean distance from the embedded parameters to the target."""
    r = _embed_array(x) - target
    return float(r @ r)


def projection_gradient(x: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Analytic gradient of :func:`projection_objective` in the parameters.

    Each composite coordinate a_i * c_j contributes through both of its
    factors, so the chain rule adds the co-factor-weighted residuals to the
    plain marginal residuals.
    """
    a0, a1, c0, c1 = x
    r = _embed_array(x) - target
    return 2.0 * np.array(
        [
            r[0] + r[4] * c0 + r[5] * c1,
            r[1] + r[6] * c0 + r[7] * c1,
            r[2] + r[4] * a0 + r[6] * a1,
            r[3] + r[5] * a0 + r[7] * a1,
        ]
    )


@dataclass(frozen=True)
class ProjectionResult:
    """Best point found on the manifold for a projection target."""

    params: ManifoldParams
    point: BehaviourPoint
    squared_distance: float
    distance: float
    iterations: int
    converged: bool

    def to_json_dict(self) -> dict:
        return {
            "params": list(self.params.as_array()),
            "point": self.point.to_json_dict(),
            "squared_distance": self.squared_distance,
            "distance": self.distance,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _descend(
    start: np.ndarray, target: np.ndarray, max_iter: int, grad_tol: float
) -> tuple[np.ndarray, float, int, bool]:
    x = np.clip(start, 0.0, 1.0)
    value = projection_objective(x, target)
    for iteration in range(1, max_iter + 1):
        grad = projection_gradient(x, target)
        # Gradient components pushing against an active box face do not count
        # toward the stationarity measure.
        projected = grad.copy()
        projected[(x <= 0.0) & (grad > 0.0)] = 0.0
        projected[(x >= 1.0) & (grad < 0.0)] = 0.0
        if np.linalg.norm(projected) <= grad_tol:
            return x, value, iteration - 1, True
        step = 1.0
        while step >= _MIN_STEP:
            candidate = np.clip(x - step * grad, 0.0, 1.0)
            trial = projection_objective(candidate, target)
            if trial <= value - _ARMIJO_C * float(grad @ (x - candidate)):
                break
            step *= _BACKTRACK
        else:
            # No step produced sufficient decrease: stuck at machine precision.
            return x, value, iteration, False
        x, value = candidate, trial
    grad = projection_gradient(x, target)
    projected = grad.copy()
    projected[(x <= 0.0) & (grad > 0.0)] = 0.0
    projected[(x >= 1.0) & (grad < 0.0)] = 0.0
    return x, value, max_iter, bool(np.linalg.norm(projected) <= grad_tol)


def project(
    point: BehaviourPoint,
    starts: int = 9,
    max_iter: int = 2000,
    grad_tol: float = 1e-9,
) -> ProjectionResult:
    """Closest uncorrelated behaviour to ``point`` in Euclidean distance.

    Runs projected gradient descent with Armijo backtracking from ``starts``
    fixed lattice points plus the target's own marginals, and keeps the best
    minimum (ties resolved in favour of the earliest start, so results are
    deterministic).
    """
    if point.representation != REDUCED_8:
        raise ValueError("projection is defined for reduced-8 points")
    if not 0 <= starts <= len(_LATTICE_STARTS):
        raise ValueError(f"starts must lie in 0..{len(_LATTICE_STARTS)}")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    target = point.as_array()
    start_list = [np.array(s) for s in _LATTICE_STARTS[:starts]]
    start_list.append(target[:4].copy())
    best = None
    for start in start_list:
        x, value, iterations, converged = _descend(start, target, max_iter, grad_tol)
        if best is None or value < best[1]:
            best = (x, value, iterations, converged)
    x, value, iterations, converged = best
    params = ManifoldParams(*(float(v) for v in np.clip(x, 0.0, 1.0)))
    value = max(value, 0.0)
    return ProjectionResult(
        params=params,
        point=embed(params),
        squared_distance=value,
        distance=float(np.sqrt(value)),
        iterations=iterations,
        converged=converged,
    )


def normalized_score(
    observed: BehaviourPoint,
    reference: BehaviourPoint,
    degenerate_tol: float = 1e-8,
    **project_options,
) -> float:
    """Projection distance of ``observed`` relative to a reference point.

    Both points are projected onto the uncorrelated manifold; the score is
    the ratio of their distances, 1.0 meaning "as far from uncorrelated as
    the reference".  A reference already on the manifold (distance below
    ``degenerate_tol``) has no meaningful scale and raises ValueError.
    """
    reference_distance = project(reference, **project_options).distance
    if reference_distance <= degenerate_tol:
        raise ValueError("degenerate reference: it already lies on the manifold")
    return project(observed, **project_options).distance / reference_distance
