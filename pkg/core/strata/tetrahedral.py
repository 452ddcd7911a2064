"""
Critical points at the tetrahedral point K = 1/sqrt(2), rho = 0.
"""

from __future__ import annotations

import math

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.critical import CriticalPoint, classify_points, sort_points
from core.orientation import from_cylinder
from core.strata.labels import TETRAHEDRAL_K
from core.tensor import OctupolarTensor, to_cartesian


NU_M = math.asin(1.0 / 3.0)
NU_S = math.asin(1.0 / math.sqrt(3.0))

# Meridians through the three southern vertices and through their antipodes.
VERTEX_MERIDIANS = (-5 * math.pi / 6, -math.pi / 6, math.pi / 2)
FACE_MERIDIANS = (-math.pi / 2, math.pi / 6, 5 * math.pi / 6)

TETRAHEDRON_VERTICES = np.array(
    [
        [0.0, 2.0 * math.sqrt(2.0) / 3.0, -1.0 / 3.0],
        [math.sqrt(2.0 / 3.0), -math.sqrt(2.0) / 3.0, -1.0 / 3.0],
        [-math.sqrt(2.0 / 3.0), -math.sqrt(2.0) / 3.0, -1.0 / 3.0],
        [0.0, 0.0, 1.0],
    ]
)


def tetrahedral_tensor() -> OctupolarTensor:
    return from_cylinder(TETRAHEDRAL_K, 0.0, -math.pi / 2)


def tetrahedral_locations() -> list[tuple[float, float]]:
    locations = [(math.pi / 2, 0.0), (-math.pi / 2, 0.0)]
    locations += [(-NU_M, phi) for phi in VERTEX_MERIDIANS]
    locations += [(NU_M, phi) for phi in FACE_MERIDIANS]
    locations += [(NU_S, phi) for phi in VERTEX_MERIDIANS]
    locations += [(-NU_S, phi) for phi in FACE_MERIDIANS]
    return locations


def tetrahedral_spectrum(cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    cfg = cfg or get_default_config()
    theta1, theta2 = np.array(tetrahedral_locations()).T
    return sort_points(classify_points(tetrahedral_tensor(), to_cartesian(theta1, theta2), cfg))
