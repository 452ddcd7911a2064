"""
The center K = rho = 0: two poles and two circles of degenerate extrema.
"""

from __future__ import annotations

import math

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.critical import CriticalCircle, CriticalPoint, classify_points, sort_points
from core.orientation import from_cylinder
from core.tensor import OctupolarTensor


CIRCLE_SINE = 1.0 / math.sqrt(5.0)


def center_tensor() -> OctupolarTensor:
    return from_cylinder(0.0, 0.0, -math.pi / 2)


def center_profile(theta1):
    """Potential at the center as a function of latitude alone."""
    theta1 = np.asarray(theta1, dtype=float)
    return (3.0 * np.sin(theta1) - 5.0 * np.sin(3.0 * theta1)) / 8.0


def center_circles() -> list[CriticalCircle]:
    latitude = math.asin(CIRCLE_SINE)
    curvature = 12.0 / math.sqrt(5.0)
    return [
        CriticalCircle(theta1=-latitude, value=CIRCLE_SINE, hessian_eig=-curvature),
        CriticalCircle(theta1=latitude, value=-CIRCLE_SINE, hessian_eig=curvature),
    ]


def center_spectrum(cfg: SolverConfig | None = None) -> tuple[list[CriticalPoint], list[CriticalCircle]]:
    cfg = cfg or get_default_config()
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    return sort_points(classify_points(center_tensor(), poles, cfg)), center_circles()
