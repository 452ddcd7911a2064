"""
Axis stratum rho = 0 (D3h symmetry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from config.settings import SolverConfig, get_default_config
from core.critical import CriticalPoint, classify_points, sort_points
from core.errors import NonPositiveK
from core.orientation import from_cylinder
from core.strata.tetrahedral import FACE_MERIDIANS, VERTEX_MERIDIANS
from core.tensor import to_cartesian


@dataclass(frozen=True)
class D3hShorthands:
    q_minus: float
    q_plus: float
    tau_minus: float
    tau_plus: float
    zeta_minus: float
    zeta_plus: float


def d3h_eta_roots(k: float) -> tuple[float, float]:
    """Roots of 1 - 4 eta^2 + 2 K eta = 0, with eta = tan(theta1) on the vertex meridians."""
    root = math.sqrt(k * k + 4.0)
    return (k - root) / 4.0, (k + root) / 4.0


def d3h_latitude_shorthands(k: float) -> D3hShorthands:
    root = math.sqrt(4.0 + k * k)
    q_minus = 1.0 / (10.0 + k * k - k * root)
    q_plus = 1.0 / (10.0 + k * k + k * root)
    zeta_minus = math.sqrt(2.0 * q_minus**3) * (k**3 - k * k * root + 13.0 * k + 5.0 * root)
    zeta_plus = math.sqrt(2.0 * q_plus**3) * (k**3 + k * k * root + 13.0 * k - 5.0 * root)
    tau_minus = math.asin(math.sqrt(q_minus * (k * k + 2.0 - k * root)))
    tau_plus = math.asin(math.sqrt(q_plus * (k * k + 2.0 + k * root)))
    return D3hShorthands(q_minus, q_plus, tau_minus, tau_plus, zeta_minus, zeta_plus)


def d3h_bifurcation_k() -> float:
    """K at which the three southern maxima reach the height of the North Pole."""
    return brentq(lambda k: d3h_latitude_shorthands(k).zeta_minus - 1.0, 0.1, 2.0, xtol=1e-15)


def d3h_meridian_hessian(k: float, theta1: float, face: bool) -> tuple[float, float]:
    """Diagonal angular Hessian (psi_11, psi_22) along a symmetry meridian.

    face selects the meridians with sin(3 theta2) = +1; otherwise sin(3 theta2) = -1.
    """
    s, c = math.sin(theta1), math.cos(theta1)
    if face:
        psi_11 = 0.375 * (2 * k * c + 6 * k * math.cos(3 * theta1) - s + 15 * math.sin(3 * theta1))
        return psi_11, 9.0 * k * c**3
    psi_11 = -0.375 * (2 * k * c + 6 * k * math.cos(3 * theta1) + s - 15 * math.sin(3 * theta1))
    return psi_11, -9.0 * k * c**3


def d3h_spectrum(k: float, cfg: SolverConfig | None = None) -> list[CriticalPoint]:
    if k <= 0:
        raise NonPositiveK(k)
    cfg = cfg or get_default_config()
    eta_max, eta_saddle = d3h_eta_roots(k)
    lat_max, lat_saddle = math.atan(eta_max), math.atan(eta_saddle)

    locations = [(math.pi / 2, 0.0), (-math.pi / 2, 0.0)]
    for phi in VERTEX_MERIDIANS:
        locations += [(lat_max, phi), (lat_saddle, phi)]
    for phi in FACE_MERIDIANS:
        locations += [(-lat_max, phi), (-lat_saddle, phi)]
    theta1, theta2 = np.array(locations).T
    return sort_points(classify_points(from_cylinder(k, 0.0, -math.pi / 2), to_cartesian(theta1, theta2), cfg))
