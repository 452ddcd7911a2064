"""
Reflection planes chi = +-pi/2 and their images under the 2pi/3 rotation.

On chi = sigma * pi/2 the potential reads
    s^3 - K c^3 sin(3 theta2) + (3/2) s c^2 (sigma rho cos(2 theta2) - 1),
so critical points either sit on the meridians theta2 = +-pi/2 or have
u = sin^2(theta2) solving C u^2 - 2 A u + K^2 (2 - sigma rho) = 0.
"""

from __future__ import annotations

import math

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.critical import CriticalPoint, classify_points, sort_points
from core.errors import OutsideCylinder
from core.orientation import from_cylinder
from core.sphere import riemannian_gradient, unique_directions
from core.strata.axis import d3h_spectrum
from core.strata.center import center_spectrum
from core.strata.disk import d2h_spectrum
from core.tensor import to_angles, to_cartesian, wrap_angle


DOUBLE_ROOT_TOL = 1e-14
U_EDGE = 1e-12


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 2.0:
        raise OutsideCylinder(rho)


def curve_f(rho: float) -> float:
    _check_rho(rho)
    return math.sqrt(2.0 * rho * rho * (1.0 + rho) / (3.0 * (6.0 + rho)))


def curve_g(rho: float) -> float:
    _check_rho(rho)
    if rho <= 1.0:
        return math.sqrt(2.0 * rho * rho * (1.0 - rho) / (3.0 * (6.0 - rho)))
    return math.sqrt(max(0.0, 2.0 * (2.0 - rho) * (rho - 1.0)))


def saddle_latitude(rho: float) -> float:
    """Latitude of the index-zero point on chi = -pi/2, K = g(rho), 1 <= rho <= 2."""
    if not 1.0 <= rho <= 2.0:
        raise OutsideCylinder(rho)
    return -math.asin(math.sqrt((rho - 1.0) / (3.0 - rho)))


def third_order_expansion(rho: float) -> dict[str, float]:
    """Closed-form Taylor coefficients at (saddle_latitude(rho), -pi/2) for K = g(rho).

    Keys follow ExpansionCoefficients: "22" multiplies (theta2 + pi/2)^2, "111"
    multiplies (theta1 - theta_S)^3 and "122" the mixed cubic term.
    """
    if not 1.0 <= rho <= 2.0:
        raise OutsideCylinder(rho)
    return {
        "constant": -math.sqrt((rho - 1.0) * (3.0 - rho)),
        "22": 12.0 * (2.0 - rho) * math.sqrt((rho - 1.0) / (3.0 - rho)),
        "111": 0.5 * math.sqrt(2.0 * (2.0 - rho) * (3.0 - rho)),
        "122": 3.0 * math.sqrt(2.0) * (5.0 * rho - 6.0) * math.sqrt((2.0 - rho) / (3.0 - rho)),
    }


def meridian_sines(k: float, rho: float, sign: int) -> list[float]:
    """Values of sin^2(theta1) for the critical points on theta2 = +-pi/2."""
    a = sign * rho
    disc = 4.0 + k * k + 6.0 * a + 2.0 * rho * rho
    if disc < 0:
        return []
    alpha = 5.0 + 2.0 * k * k + 8.0 * a + 3.0 * rho * rho
    beta = 2.0 * k * math.sqrt(disc)
    gamma = 4.0 * k * k + (5.0 + 3.0 * a) ** 2
    return sorted({(alpha - beta) / gamma, (alpha + beta) / gamma})


def generic_coefficients(k: float, rho: float, sign: int) -> tuple[float, float, float]:
    """(C, A, constant) of C u^2 - 2 A u + constant = 0."""
    a = sign * rho
    big_a = 2.0 * k * k * (4.0 - a) + rho * rho * (1.0 - a)
    big_c = 4.0 * (8.0 * k * k - a * rho * rho)
    return big_c, big_a, k * k * (2.0 - a)


def _real_roots(coeffs) -> list[float]:
    """Real roots of a x^2 + b x + c; a discriminant within rounding of zero gives the double root."""
    a, b, c = (float(v) for v in coeffs)
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    if abs(a) <= 1e-14 * scale:
        return [] if b == 0.0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if abs(disc) <= DOUBLE_ROOT_TOL * (b * b + 4.0 * abs(a * c)):
        return [-b / (2.0 * a)]
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    # Cancellation-free pair.
    q = -0.5 * (b + math.copysign(root, b))
    roots = [q / a]
    if q != 0.0:
        roots.append(c / q)
    return roots


def _candidates(k: float, rho: float, sign: int) -> list[tuple[float, float]]:
    a = sign * rho
    found = [(math.pi / 2, 0.0), (-math.pi / 2, 0.0)]
    for theta2, slope in ((math.pi / 2, -2.0 * k), (-math.pi / 2, 2.0 * k)):
        for t in _real_roots([2.0 * (2.0 + a), slope, -(1.0 + a)]):
            found.append((math.atan(t), theta2))
    big_c, big_a, const = generic_coefficients(k, rho, sign)
    for u in _real_roots([big_c, -2.0 * big_a, const]):
        # u at either end lands on a pole or a meridian point already listed.
        if not U_EDGE < u < 1.0 - U_EDGE:
            continue
        for y in (math.sqrt(u), -math.sqrt(u)):
            t = -sign * k * (1.0 - 4.0 * y * y) / (2.0 * rho * y)
            base = math.asin(y)
            found += [(math.atan(t), base), (math.atan(t), math.pi - base)]
    return found


def _plane_points(k: float, rho: float, sign: int, cfg: SolverConfig) -> np.ndarray:
    tensor = from_cylinder(k, rho, sign * math.pi / 2)
    theta1, theta2 = np.array(_candidates(k, rho, sign)).T
    points = to_cartesian(theta1, wrap_angle(theta2))
    residual = np.linalg.norm(riemannian_gradient(tensor.full, points), axis=1)
    return unique_directions(points[residual < cfg.closed_form_tol], cfg.closed_form_dedupe)


def reflection_plane_spectrum(
    k: float, rho: float, sign: int, cfg: SolverConfig | None = None
) -> list[CriticalPoint]:
    """Critical points on the plane chi = sign * pi/2."""
    _check_rho(rho)
    cfg = cfg or get_default_config()
    chi = sign * math.pi / 2
    if rho == 0.0 or k == 0.0:
        if k != 0.0:
            return d3h_spectrum(abs(k), cfg)
        if rho == 0.0:
            return center_spectrum(cfg)[0]
        return d2h_spectrum(rho, chi, cfg)

    k = abs(k)
    points = _plane_points(k, rho, sign, cfg)
    return sort_points(classify_points(from_cylinder(k, rho, chi), points, cfg))


def plane_rotation(chi: float, tol: float = 1e-9) -> tuple[int, float] | None:
    """(sign, longitude shift) relating chi to sign * pi/2, if chi lies on a plane."""
    for sign in (1, -1):
        for m in range(3):
            if abs(float(wrap_angle(sign * math.pi / 2 + 2 * math.pi * m / 3 - chi))) <= tol:
                return sign, 2 * math.pi * m / 3
    return None


def _require_plane(chi: float, tol: float) -> tuple[int, float]:
    found = plane_rotation(chi, tol)
    if found is None:
        raise ValueError(f"chi={chi!r} is not a reflection-plane angle")
    return found


def _shifted(points: np.ndarray, shift: float) -> np.ndarray:
    theta1, theta2 = to_angles(points)
    return to_cartesian(theta1, wrap_angle(theta2 + shift))


def reflection_plane_spectrum_at(
    k: float, rho: float, chi: float, cfg: SolverConfig | None = None
) -> list[CriticalPoint]:
    """Spectrum on any of the six reflection-plane angles, rotated from sign * pi/2."""
    cfg = cfg or get_default_config()
    sign, shift = _require_plane(chi, cfg.stratum_tol)
    base = reflection_plane_spectrum(k, rho, sign, cfg)
    if shift == 0.0:
        return base
    points = _shifted(np.array([cp.cartesian() for cp in base]), shift)
    return sort_points(classify_points(from_cylinder(k, rho, chi), points, cfg))


def reflection_plane_points_at(
    k: float, rho: float, chi: float, cfg: SolverConfig | None = None
) -> np.ndarray:
    """Unclassified critical points on a reflection-plane angle, as unit vectors."""
    cfg = cfg or get_default_config()
    sign, shift = _require_plane(chi, cfg.stratum_tol)
    _check_rho(rho)
    if rho == 0.0 or k == 0.0:
        return np.array([cp.cartesian() for cp in reflection_plane_spectrum_at(k, rho, chi, cfg)])
    points = _plane_points(abs(k), rho, sign, cfg)
    return points if shift == 0.0 else _shifted(points, shift)
