"""
Critical-point records and their Hessian/winding classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from config.settings import SolverConfig
from core.errors import LoopHitsSingularity
from core.sphere import nearest_neighbour_distance, riemannian_gradient, winding_index
from core.tensor import OctupolarTensor, SphericalPoint, chart_hessian, potential_array


class MorseType(str, Enum):
    MAX = "Max"
    MIN = "Min"
    SADDLE = "Saddle"
    DEGENERATE_SADDLE = "DegenerateSaddle"
    DEGENERATE_EXTREMUM = "DegenerateExtremum"
    CIRCLE_DEGENERATE = "CircleDegenerate"


@dataclass(frozen=True)
class CriticalPoint:
    location: SphericalPoint
    value: float
    hessian_eigs: tuple[float, float]
    morse_type: MorseType
    index: int
    residual: float = 0.0

    @property
    def eigenvalue(self) -> float:
        return self.value

    @property
    def is_maximum(self) -> bool:
        # A degenerate extremum has one vanishing eigenvalue; the other fixes its kind.
        return self.morse_type is MorseType.MAX or (
            self.morse_type is MorseType.DEGENERATE_EXTREMUM and sum(self.hessian_eigs) < 0
        )

    @property
    def is_minimum(self) -> bool:
        return self.morse_type is MorseType.MIN or (
            self.morse_type is MorseType.DEGENERATE_EXTREMUM and sum(self.hessian_eigs) >= 0
        )

    @property
    def is_saddle(self) -> bool:
        return not (self.is_maximum or self.is_minimum)

    def cartesian(self) -> np.ndarray:
        return self.location.cartesian()

    def to_dict(self) -> dict[str, Any]:
        return {
            "theta1": self.location.theta1,
            "theta2": self.location.theta2,
            "lambda": self.value,
            "hessian_eigs": list(self.hessian_eigs),
            "type": self.morse_type.value,
            "index": self.index,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class CriticalCircle:
    """A latitude circle made entirely of degenerate critical points."""

    theta1: float
    value: float
    hessian_eig: float

    @property
    def multiplier(self) -> float:
        return 3.0 * self.value

    @property
    def kind(self) -> str:
        return "max" if self.hessian_eig < 0 else "min"

    def to_dict(self) -> dict[str, Any]:
        return {
            "theta1": self.theta1,
            "lambda": self.value,
            "multiplier": self.multiplier,
            "hessian_eig": self.hessian_eig,
            "kind": self.kind,
            "type": MorseType.CIRCLE_DEGENERATE.value,
        }


def is_degenerate(eigs, tol: float) -> bool:
    eigs = np.asarray(eigs, dtype=float)
    scale = max(1.0, float(np.abs(eigs).max()))
    return bool(np.abs(eigs).min() <= tol * scale)


def morse_type_from_eigs(eigs, tol: float) -> tuple[MorseType, int] | None:
    """Type and index of a non-degenerate point, or None when degenerate."""
    if is_degenerate(eigs, tol):
        return None
    low, high = float(min(eigs)), float(max(eigs))
    if high < 0:
        return MorseType.MAX, 1
    if low > 0:
        return MorseType.MIN, 1
    return MorseType.SADDLE, -1


def loop_index(t: OctupolarTensor, x: np.ndarray, radius: float, samples: int) -> int:
    """Winding index, shrinking the loop when it grazes another zero."""
    r = radius
    for _ in range(6):
        try:
            return winding_index(t.full, x, r, samples)
        except LoopHitsSingularity:
            r *= 0.5
    return winding_index(t.full, x, r, samples)


def classify_points(t: OctupolarTensor, points: np.ndarray, cfg: SolverConfig) -> list[CriticalPoint]:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        return []
    a = t.full
    values = potential_array(a, points)
    residuals = np.linalg.norm(riemannian_gradient(a, points), axis=1)
    spacing = nearest_neighbour_distance(points)

    result = []
    for x, value, residual, gap in zip(points, values, residuals, spacing):
        location = SphericalPoint.from_cartesian(x)
        eigs = np.linalg.eigvalsh(chart_hessian(t, location))
        eig_pair = (float(eigs[0]), float(eigs[1]))
        known = morse_type_from_eigs(eigs, cfg.degeneracy_tol)
        if known is not None and not is_degenerate(eigs, cfg.winding_eig_tol):
            morse_type, index = known
        else:
            # Eigenvalues this small leave the sign test unreliable; the loop decides.
            radius = min(cfg.winding_radius, 0.4 * gap) if math.isfinite(gap) else cfg.winding_radius
            try:
                index = loop_index(t, x, radius, cfg.winding_samples)
            except LoopHitsSingularity:
                if known is None:
                    raise
                index = known[1]
            if known is not None and known[1] == index:
                morse_type = known[0]
            else:
                morse_type = MorseType.DEGENERATE_EXTREMUM if index == 1 else MorseType.DEGENERATE_SADDLE
        result.append(
            CriticalPoint(
                location=location,
                value=float(value),
                hessian_eigs=eig_pair,
                morse_type=morse_type,
                index=index,
                residual=float(residual),
            )
        )
    return result


def sort_points(points: list[CriticalPoint]) -> list[CriticalPoint]:
    return sorted(
        points,
        key=lambda cp: (-round(cp.value, 9), round(cp.location.theta1, 9), round(cp.location.theta2, 9)),
    )


def index_sum(points: list[CriticalPoint]) -> int:
    return int(sum(cp.index for cp in points))
