"""
Analytic starting points for the numerical search at arbitrary parameters.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import brentq

from config.settings import SolverConfig
from core.errors import OctupolarError
from core.orientation import OrientedParams
from core.strata.axis import d3h_spectrum
from core.strata.disk import d2h_spectrum
from core.strata.labels import PLANE_ANGLES
from core.strata.planes import reflection_plane_spectrum_at
from core.tensor import to_cartesian, wrap_angle


logger = logging.getLogger(__name__)

LONGITUDE_SAMPLES = 4096


def longitude_residual(theta2, k: float, rho: float, chi: float):
    """Stationarity in theta1 after eliminating tan(theta1) with the theta2 equation.

    Non-polar critical points of the oriented potential are exactly the zeros of
    this function, with tan(theta1) = K cos(3 theta2) / (rho cos(chi + 2 theta2)).
    """
    theta2 = np.asarray(theta2, dtype=float)
    phase = chi + 2.0 * theta2
    w = rho * np.sin(phase)
    c3, s3, cp = np.cos(3.0 * theta2), np.sin(3.0 * theta2), np.cos(phase)
    return 2.0 * (2.0 - w) * k * k * c3 * c3 + 2.0 * k * rho * s3 * c3 * cp + (w - 1.0) * rho * rho * cp * cp


def _latitudes(theta2: float, k: float, rho: float, chi: float) -> list[float]:
    phase = chi + 2.0 * theta2
    cp = math.cos(phase)
    if abs(cp) > 1e-9:
        return [math.atan(k * math.cos(3.0 * theta2) / (rho * cp))]
    w = rho * math.sin(phase)
    roots = np.roots([2.0 * (2.0 - w), 2.0 * k * math.sin(3.0 * theta2), w - 1.0])
    return [math.atan(float(r.real)) for r in roots if abs(r.imag) < 1e-6]


def longitude_seeds(p: OrientedParams, samples: int = LONGITUDE_SAMPLES) -> np.ndarray:
    if p.k <= 0 or p.rho <= 0:
        return np.zeros((0, 3))
    k, rho, chi = p.k, p.rho, p.chi
    grid = np.linspace(-math.pi, math.pi, samples, endpoint=False)
    values = longitude_residual(grid, k, rho, chi)
    closed = np.append(values, values[0])
    nodes = np.append(grid, math.pi)

    roots: list[float] = []
    for i in np.flatnonzero(np.sign(closed[:-1]) * np.sign(closed[1:]) < 0):
        roots.append(brentq(longitude_residual, nodes[i], nodes[i + 1], args=(k, rho, chi), xtol=1e-15))

    # Touching zeros do not change sign; keep near-zero local minima of |H| as well.
    magnitude = np.abs(values)
    scale = max(float(magnitude.max()), 1e-300)
    left, right = np.roll(magnitude, 1), np.roll(magnitude, -1)
    touching = (magnitude <= left) & (magnitude <= right) & (magnitude < 1e-4 * scale)
    roots.extend(float(v) for v in grid[touching])

    seeds = [(lat, theta2) for theta2 in roots for lat in _latitudes(theta2, k, rho, chi)]
    if not seeds:
        return np.zeros((0, 3))
    theta1, theta2 = np.array(seeds).T
    return to_cartesian(theta1, theta2)


def nearest_plane_angle(chi: float) -> float:
    angles = [angle for pair in PLANE_ANGLES.values() for angle in pair]
    return min(angles, key=lambda angle: abs(float(wrap_angle(chi - angle))))


def stratum_seeds(p: OrientedParams, cfg: SolverConfig) -> np.ndarray:
    """Closed-form critical points of the strata nearest to p, as Cartesian seeds."""
    spectra = []
    attempts = []
    if p.k > 0:
        attempts.append(lambda: d3h_spectrum(p.k, cfg))
    if p.rho > 0:
        attempts.append(lambda: d2h_spectrum(p.rho, p.chi, cfg))
        attempts.append(lambda: reflection_plane_spectrum_at(p.k, p.rho, nearest_plane_angle(p.chi), cfg))
    for attempt in attempts:
        try:
            spectra.extend(attempt())
        except OctupolarError as exc:
            logger.debug("skipping stratum seeds: %s", exc)
    seeds = [cp.cartesian() for cp in spectra]
    parts = [np.array(seeds).reshape(-1, 3), longitude_seeds(p)]
    return np.vstack(parts)
