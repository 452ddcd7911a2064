"""
Batched Newton search for critical points of the potential on the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from config.settings import SolverConfig
from core.errors import LoopHitsSingularity
from core.tensor import cartesian_gradient, cartesian_second, to_cartesian


MAX_STEP = 0.5


@dataclass
class NewtonBatch:
    points: np.ndarray
    residuals: np.ndarray
    iterations: int

    def converged(self, tol: float) -> np.ndarray:
        return self.residuals < tol


def normalize(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def tangent_frame(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangent vectors e1, e2 with (e1, e2, x) right-handed."""
    points = np.atleast_2d(points)
    helper = np.zeros_like(points)
    near_pole = np.abs(points[:, 2]) > 0.9
    helper[~near_pole, 2] = 1.0
    helper[near_pole, 0] = 1.0
    e1 = helper - np.sum(helper * points, axis=1, keepdims=True) * points
    e1 = normalize(e1)
    e2 = np.cross(points, e1)
    return e1, e2


def riemannian_gradient(a: np.ndarray, points: np.ndarray) -> np.ndarray:
    g = cartesian_gradient(a, points)
    radial = np.sum(g * points, axis=-1, keepdims=True)
    return g - radial * points


def _merit(a: np.ndarray, points: np.ndarray) -> np.ndarray:
    rg = riemannian_gradient(a, points)
    return np.sum(rg * rg, axis=-1)


def newton_step(a: np.ndarray, points: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Newton direction in tangent coordinates plus the frame it is expressed in."""
    e1, e2 = tangent_frame(points)
    frame = np.stack([e1, e2], axis=-1)
    g = cartesian_gradient(a, points)
    radial = np.sum(g * points, axis=-1)
    h = cartesian_second(a, points) - radial[:, None, None] * np.eye(3)
    h2 = np.einsum("nia,nij,njb->nab", frame, h, frame)
    g2 = np.einsum("nia,ni->na", frame, g)

    det = h2[:, 0, 0] * h2[:, 1, 1] - h2[:, 0, 1] * h2[:, 1, 0]
    scale = np.maximum(np.abs(h2).max(axis=(1, 2)), 1.0)
    singular = np.abs(det) < 1e-14 * scale * scale
    safe = np.where(singular, 1.0, det)
    d0 = -(h2[:, 1, 1] * g2[:, 0] - h2[:, 0, 1] * g2[:, 1]) / safe
    d1 = -(-h2[:, 1, 0] * g2[:, 0] + h2[:, 0, 0] * g2[:, 1]) / safe
    direction = np.stack([d0, d1], axis=-1)
    direction[singular] = -g2[singular] / scale[singular, None]

    length = np.linalg.norm(direction, axis=1)
    too_long = length > MAX_STEP
    direction[too_long] *= (MAX_STEP / length[too_long])[:, None]
    return direction, frame, singular


def newton_search(a: np.ndarray, seeds: np.ndarray, cfg: SolverConfig) -> NewtonBatch:
    """Run damped Newton on the Riemannian gradient from every seed at once.

    The step is accepted on decrease of |grad|^2, halving up to
    cfg.backtrack_steps times; when no trial decreases it the best trial is taken.
    """
    x = normalize(np.atleast_2d(np.asarray(seeds, dtype=float)))
    merit = _merit(a, x)
    target = cfg.grad_tol * cfg.grad_tol
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        active = np.flatnonzero(merit > target)
        if active.size == 0:
            break
        xa = x[active]
        direction, frame, _ = newton_step(a, xa)
        step_vec = np.einsum("nia,na->ni", frame, direction)

        best_x = xa.copy()
        best_m = merit[active].copy()
        pending = np.ones(active.size, dtype=bool)
        factor = 1.0
        for _ in range(cfg.backtrack_steps + 1):
            idx = np.flatnonzero(pending)
            if idx.size == 0:
                break
            trial = normalize(xa[idx] + factor * step_vec[idx])
            trial_m = _merit(a, trial)
            improved = trial_m < best_m[idx]
            best_x[idx[improved]] = trial[improved]
            best_m[idx[improved]] = trial_m[improved]
            pending[idx[improved]] = False
            factor *= cfg.backtrack_factor

        # Stuck seeds still move by the smallest trial so they can leave flat spots.
        stuck = np.flatnonzero(pending)
        if stuck.size:
            best_x[stuck] = normalize(xa[stuck] + factor * step_vec[stuck])
            best_m[stuck] = _merit(a, best_x[stuck])
        x[active] = best_x
        merit[active] = best_m
    return NewtonBatch(points=x, residuals=np.sqrt(merit), iterations=iterations)


def grid_seeds(shape: tuple[int, int], offset: float = 0.0) -> np.ndarray:
    """Cell-centred latitude/longitude seeds plus both poles."""
    n_lat, n_lon = shape
    theta1 = -math.pi / 2 + (np.arange(n_lat) + 0.5) * math.pi / n_lat
    theta2 = -math.pi + (np.arange(n_lon) + 0.5 + offset) * 2 * math.pi / n_lon
    t1, t2 = np.meshgrid(theta1, theta2, indexing="ij")
    points = to_cartesian(t1.ravel(), t2.ravel())
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    return np.vstack([points, poles])


def ring_seeds(center: np.ndarray, radii, count: int = 12) -> np.ndarray:
    e1, e2 = tangent_frame(center[None, :])
    phases = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
    rings = [
        center + r * (np.cos(phi) * e1[0] + np.sin(phi) * e2[0])
        for r in radii
        for phi in phases
    ]
    return normalize(np.array(rings))


def unique_directions(points: np.ndarray, radius: float) -> np.ndarray:
    """Greedy merge of points closer than radius, in lexicographic order of x, y, z.

    The order key is rounded so it does not depend on last-digit noise; the
    returned points keep full precision.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.size == 0:
        return points.reshape(0, 3)
    order = np.lexsort(np.round(points, 9)[:, ::-1].T)
    ordered = points[order]
    tree = cKDTree(ordered)
    taken = np.zeros(ordered.shape[0], dtype=bool)
    keep: list[int] = []
    for i in range(ordered.shape[0]):
        if taken[i]:
            continue
        keep.append(i)
        taken[tree.query_ball_point(ordered[i], radius)] = True
    return ordered[keep]


def nearest_neighbour_distance(points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(points)
    if points.shape[0] < 2:
        return np.full(points.shape[0], np.inf)
    distances, _ = cKDTree(points).query(points, k=2)
    return distances[:, 1]


def winding_index(a: np.ndarray, center, radius: float, samples: int = 32) -> int:
    """Index of the gradient field at center from its winding along a small loop."""
    center = normalize(np.asarray(center, dtype=float))
    e1, e2 = tangent_frame(center[None, :])
    phases = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    loop = normalize(
        center[None, :]
        + radius * (np.cos(phases)[:, None] * e1 + np.sin(phases)[:, None] * e2)
    )
    field = riemannian_gradient(a, loop)
    w1 = field @ e1[0]
    w2 = field @ e2[0]
    magnitude = np.hypot(w1, w2)
    if magnitude.min() < 1e-12:
        raise LoopHitsSingularity(float(magnitude.min()))
    angles = np.arctan2(w2, w1)
    steps = np.diff(np.append(angles, angles[0]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    return int(round(steps.sum() / (2 * math.pi)))
