"""
Disk stratum K = 0 (D2h symmetry).

Only the combination Theta = theta2 + chi / 2 matters on the disk.
"""

from __future__ import annotations

import math

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.critical import CriticalPoint, classify_points, sort_points
from core.errors import OutsideCylinder
from core.orientation import from_cylinder
from core.sphere import unique_directions
from core.tensor import to_cartesian


def d2h_half_angles(rho: float) -> tuple[float, float | None]:
    """Latitudes r+ of the extrema and r- of the off-equator saddles (None for rho > 1)."""
    r_plus = 0.5 * math.acos((3.0 + rho) / (5.0 + 3.0 * rho))
    if rho > 1.0:
        return r_plus, None
    r_minus = 0.5 * math.acos(min(1.0, (3.0 - rho) / (5.0 - 3.0 * rho)))
    return r_plus, r_minus


def d2h_extremum_value(rho: float) -> float:
    return (1.0 + rho) * math.sin(d2h_half_angles(rho)[0])


def disk_reflection_slopes(chi: float) -> tuple[float, float]:
    """Slopes m1, m2 of the two vertical mirror planes y = m x."""
    c = math.cos(chi)
    if abs(c) < 1e-15:
        return (-math.inf, 0.0) if math.sin(chi) > 0 else (0.0, math.inf)
    return -(1.0 + math.sin(chi)) / c, (1.0 - math.sin(chi)) / c


def reflection_matrix(m: float) -> np.ndarray:
    """Mirror across the vertical plane y = m x."""
    if math.isinf(m):
        angle = math.pi / 2
    else:
        angle = math.atan(m)
    c2, s2 = math.cos(2 * angle), math.sin(2 * angle)
    return np.array([[c2, s2, 0.0], [s2, -c2, 0.0], [0.0, 0.0, 1.0]])


def d2h_locations(rho: float, chi: float) -> list[tuple[float, float]]:
    r_plus, r_minus = d2h_half_angles(rho)
    shift = chi / 2.0
    locations = [(math.pi / 2, 0.0), (-math.pi / 2, 0.0)]
    for big_theta in (-math.pi / 4, 3 * math.pi / 4):
        locations += [(-r_plus, big_theta - shift), (r_plus, big_theta - shift)]
    if r_minus is not None:
        for big_theta in (math.pi / 4, -3 * math.pi / 4):
            locations += [(-r_minus, big_theta - shift), (r_minus, big_theta - shift)]
    else:
        omega = math.asin(1.0 / rho)
        for two_theta in (omega, math.pi - omega, omega + 2 * math.pi, 3 * math.pi - omega):
            locations.append((0.0, two_theta / 2.0 - shift))
    return locations


def d2h_spectrum(rho: float, chi: float, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    if not 0.0 < rho <= 2.0:
        raise OutsideCylinder(rho)
    cfg = cfg or get_default_config()
    theta1, theta2 = np.array(d2h_locations(rho, chi)).T
    points = unique_directions(to_cartesian(theta1, theta2), cfg.closed_form_dedupe)
    return sort_points(classify_points(from_cylinder(0.0, rho, chi), points, cfg))
