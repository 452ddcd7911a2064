"""
Numerical search, classification and reporting of all critical points.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar, root

from config.settings import SolverConfig, get_default_config
from core.critical import (
    CriticalCircle,
    CriticalPoint,
    MorseType,
    classify_points,
    index_sum,
    is_degenerate,
    loop_index,
    morse_type_from_eigs,
    sort_points,
)
from core.errors import NonConvergence, NotCritical, NotDegenerate
from core.orientation import OrientedParams, canonical_form, params_tensor
from core.sphere import (
    grid_seeds,
    newton_search,
    normalize,
    riemannian_gradient,
    ring_seeds,
    unique_directions,
    winding_index,
)
from core.strata import (
    Stratum,
    StratumLabel,
    center_spectrum,
    classify_stratum,
    d2h_spectrum,
    d3h_spectrum,
    reflection_plane_spectrum_at,
    stratum_seeds,
    tetrahedral_spectrum,
)
from core.tensor import (
    POLE_SWITCH,
    OctupolarTensor,
    SphericalPoint,
    cartesian_chart_hessian,
    chart_hessian,
    potential_array,
    spherical_gradient,
    spherical_third_derivatives,
    to_cartesian,
)


logger = logging.getLogger(__name__)

MAX_REAL_POINTS = 14
RING_RADII = (1e-3, 3e-3, 1e-2, 3e-2)
NEAR_DEGENERATE = 1e-2


@dataclass
class SpectrumReport:
    params: OrientedParams
    points: list[CriticalPoint]
    circles: list[CriticalCircle] = field(default_factory=list)
    stratum: StratumLabel = field(default_factory=lambda: StratumLabel(Stratum.BULK))
    phase: str = ""
    absolute_max_at_pole: bool = True

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def n_max(self) -> int:
        return sum(1 for cp in self.points if cp.is_maximum)

    @property
    def n_min(self) -> int:
        return sum(1 for cp in self.points if cp.is_minimum)

    @property
    def n_saddle(self) -> int:
        return sum(1 for cp in self.points if cp.is_saddle)

    @property
    def index_sum(self) -> int:
        return index_sum(self.points)

    @property
    def variant(self) -> str:
        return "+" if self.absolute_max_at_pole else "-"

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": {"K": self.params.k, "rho": self.params.rho, "chi": self.params.chi},
            "stratum": self.stratum.name,
            "phase": self.phase,
            "variant": self.variant,
            "absolute_max_at_pole": self.absolute_max_at_pole,
            "count": self.count,
            "n_max": self.n_max,
            "n_min": self.n_min,
            "n_saddle": self.n_saddle,
            "index_sum": self.index_sum,
            "points": [cp.to_dict() for cp in self.points],
            "circles": [circle.to_dict() for circle in self.circles],
        }


def phase_label(stratum: StratumLabel, n_max: int) -> str:
    if stratum.stratum in (Stratum.BULK, Stratum.REFLECTION_PLANE):
        return f"B{n_max}" if n_max in (3, 4) else f"count-{n_max}"
    return stratum.name


def _pole_is_absolute_max(points: list[CriticalPoint]) -> bool:
    pole = next((cp for cp in points if cp.location.theta1 > math.pi / 2 - 1e-9), None)
    if pole is None:
        return False
    others = [cp.value for cp in points if cp.is_maximum and cp is not pole]
    return all(v <= pole.value + 1e-12 for v in others)


def _merge_clusters(t: OctupolarTensor, points: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Collapse the copies Newton leaves around a degenerate point onto their best member.

    Near a degenerate point the gradient grows quadratically or cubically with
    distance, so copies pass grad_tol while still far apart; they are merged
    within cfg.cluster_radius or ten cube roots of the residual. A point and
    its antipode are kept or dropped together.
    """
    if points.shape[0] == 0:
        return points
    residuals = np.linalg.norm(riemannian_gradient(t.full, points), axis=1)
    order = np.argsort(residuals, kind="stable")
    kept: list[int] = []
    for i in order:
        radius = cfg.dedupe_radius
        eigs = np.linalg.eigvalsh(chart_hessian(t, SphericalPoint.from_cartesian(points[i])))
        if is_degenerate(eigs, cfg.winding_eig_tol):
            radius = max(radius, cfg.cluster_radius, 10.0 * float(np.cbrt(residuals[i])))
        if residuals[i] >= cfg.grad_tol:
            radius = max(radius, 10.0 * math.sqrt(residuals[i]))
        if kept:
            others = points[kept]
            near = np.minimum(
                np.linalg.norm(others - points[i], axis=1), np.linalg.norm(others + points[i], axis=1)
            )
            if near.min() < radius:
                continue
        kept.append(int(i))
    return points[sorted(kept)]


def _closed(points: np.ndarray, radius: float) -> np.ndarray:
    return unique_directions(np.vstack([points, -points]), radius)


def find_critical_points(t: OctupolarTensor, seeds: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Distinct critical points reached from seeds, closed under x -> -x."""
    a = t.full
    batch = newton_search(a, seeds, cfg)
    ok = batch.converged(cfg.accept_tol)
    points, total = batch.points[ok], batch.points.shape[0]
    if not ok.all():
        retry = newton_search(a, batch.points[~ok], cfg.with_overrides(max_iters=3 * cfg.max_iters))
        rescued = retry.converged(cfg.accept_tol)
        points = np.vstack([points, retry.points[rescued]])
        failed = int((~rescued).sum())
        if failed > cfg.max_failed_fraction * total or points.shape[0] == 0:
            bad = retry.residuals[~rescued]
            raise NonConvergence(failed, total, float(bad.max()), [float(r) for r in bad[:20]])

    found = _closed(points, cfg.dedupe_radius)
    refine = []
    for x in found:
        location = SphericalPoint.from_cartesian(x)
        eigs = np.linalg.eigvalsh(chart_hessian(t, location))
        if np.abs(eigs).min() < NEAR_DEGENERATE * max(1.0, np.abs(eigs).max()):
            refine.append(ring_seeds(x, RING_RADII))
    if refine:
        extra = newton_search(a, np.vstack(refine), cfg)
        good = extra.converged(cfg.accept_tol)
        found = _closed(np.vstack([found, extra.points[good]]), cfg.dedupe_radius)

    found = _closed(_merge_clusters(t, found, cfg), cfg.dedupe_radius)
    if found.shape[0] > MAX_REAL_POINTS:
        logger.warning("found %d critical points, more than the %d possible", found.shape[0], MAX_REAL_POINTS)
    return found


def locate_critical_points(
    p: OrientedParams,
    cfg: SolverConfig | None = None,
    *,
    grid: tuple[int, int] | None = None,
    grid_offset: float = 0.0,
    extra_seeds: np.ndarray | None = None,
) -> np.ndarray:
    cfg = cfg or get_default_config()
    parts = [grid_seeds(grid or cfg.seed_grid, grid_offset), stratum_seeds(p, cfg)]
    if extra_seeds is not None and len(extra_seeds):
        parts.append(normalize(np.asarray(extra_seeds, dtype=float).reshape(-1, 3)))
    return find_critical_points(params_tensor(p), np.vstack(parts), cfg)


def build_report(
    p: OrientedParams,
    points: list[CriticalPoint],
    cfg: SolverConfig,
    circles: list[CriticalCircle] | None = None,
) -> SpectrumReport:
    stratum = classify_stratum(canonical_form(p), cfg.stratum_tol)
    points = sort_points(points)
    report = SpectrumReport(
        params=p,
        points=points,
        circles=circles or [],
        stratum=stratum,
        absolute_max_at_pole=_pole_is_absolute_max(points),
    )
    report.phase = phase_label(stratum, report.n_max)
    return report


def closed_form_spectrum(
    p: OrientedParams, stratum: StratumLabel, cfg: SolverConfig
) -> tuple[list[CriticalPoint], list[CriticalCircle]] | None:
    """Spectrum of a symmetric stratum from its closed form, or None in the bulk."""
    kind = stratum.stratum
    if kind is Stratum.CENTER:
        return center_spectrum(cfg)
    if kind is Stratum.DISK:
        return d2h_spectrum(p.rho, p.chi, cfg), []
    if kind is Stratum.TETRAHEDRAL:
        return tetrahedral_spectrum(cfg), []
    if kind is Stratum.AXIS:
        return d3h_spectrum(abs(p.k), cfg), []
    if kind is Stratum.REFLECTION_PLANE:
        return reflection_plane_spectrum_at(p.k, p.rho, p.chi, cfg), []
    return None


def solve_spectrum(
    p: OrientedParams,
    cfg: SolverConfig | None = None,
    *,
    grid: tuple[int, int] | None = None,
    grid_offset: float = 0.0,
    extra_seeds: np.ndarray | None = None,
) -> SpectrumReport:
    cfg = cfg or get_default_config()
    stratum = classify_stratum(canonical_form(p), cfg.stratum_tol)
    closed = closed_form_spectrum(p, stratum, cfg)
    if closed is not None:
        logger.debug("K=%.6g rho=%.6g chi=%.6g: closed form on %s", p.k, p.rho, p.chi, stratum.name)
        return build_report(p, closed[0], cfg, closed[1])

    found = locate_critical_points(p, cfg, grid=grid, grid_offset=grid_offset, extra_seeds=extra_seeds)
    points = classify_points(params_tensor(p), found, cfg)
    report = build_report(p, points, cfg)
    logger.debug(
        "K=%.6g rho=%.6g chi=%.6g: %d points (%d max), phase %s",
        p.k, p.rho, p.chi, report.count, report.n_max, report.phase,
    )
    return report


def eigenpairs(t: OctupolarTensor, cfg: SolverConfig | None = None) -> list[tuple[float, np.ndarray]]:
    """Real Z-eigenpairs (lambda, v) of any tensor, largest eigenvalue first."""
    cfg = cfg or get_default_config()
    found = find_critical_points(t, grid_seeds(cfg.seed_grid), cfg)
    values = potential_array(t.full, found)
    order = np.argsort(-values, kind="stable")
    return [(float(values[i]), found[i]) for i in order]


def poincare_hopf_index(
    t: OctupolarTensor,
    location: SphericalPoint,
    radius: float | None = None,
    cfg: SolverConfig | None = None,
) -> int:
    cfg = cfg or get_default_config()
    x = location.cartesian()
    gradient_norm = float(np.linalg.norm(riemannian_gradient(t.full, x[None, :])))
    if gradient_norm > 1e-8:
        raise NotCritical(gradient_norm)
    return winding_index(t.full, x, radius or cfg.winding_radius, cfg.winding_samples)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Taylor coefficients of the angular potential around a point, up to third order."""

    constant: float
    gradient: tuple[float, float]
    quadratic: dict[str, float]
    cubic: dict[str, float]

    def as_dict(self) -> dict[str, Any]:
        return {
            "constant": self.constant,
            "gradient": list(self.gradient),
            "quadratic": dict(self.quadratic),
            "cubic": dict(self.cubic),
        }


def monkey_saddle_check(
    t: OctupolarTensor, location: SphericalPoint, cfg: SolverConfig | None = None
) -> ExpansionCoefficients:
    cfg = cfg or get_default_config()
    hessian = chart_hessian(t, location)
    eigs = np.linalg.eigvalsh(hessian)
    if morse_type_from_eigs(eigs, cfg.degeneracy_tol) is not None:
        raise NotDegenerate(float(np.abs(eigs).min()))
    third = spherical_third_derivatives(t, location)
    gradient = spherical_gradient(t, location)
    return ExpansionCoefficients(
        constant=float(potential_array(t.full, location.cartesian())),
        gradient=(float(gradient[0]), float(gradient[1])),
        quadratic={
            "11": 0.5 * float(hessian[0, 0]),
            "12": float(hessian[0, 1]),
            "22": 0.5 * float(hessian[1, 1]),
        },
        cubic={
            "111": float(third[0, 0, 0]) / 6.0,
            "112": float(third[0, 0, 1]) / 2.0,
            "122": float(third[0, 1, 1]) / 2.0,
            "222": float(third[1, 1, 1]) / 6.0,
        },
    )


def _oracle_candidates(values: np.ndarray) -> list[tuple[int, int]]:
    ring = [(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1)]
    centre = values[1:-1]
    diffs = []
    for di, dj in ring:
        shifted = np.roll(values, -dj, axis=1)[1 + di : values.shape[0] - 1 + di]
        diffs.append(shifted - centre)
    diffs = np.stack(diffs)
    signs = np.sign(diffs)
    changes = (signs != np.roll(signs, -1, axis=0)).sum(axis=0)
    is_max = (diffs < 0).all(axis=0)
    is_min = (diffs > 0).all(axis=0)
    rows, cols = np.nonzero(is_max | is_min | (changes >= 4))
    return [(int(i) + 1, int(j)) for i, j in zip(rows, cols)]


def _gradient_sq(t: OctupolarTensor, theta1: float, theta2: float) -> float:
    g = riemannian_gradient(t.full, to_cartesian(theta1, theta2)[None, :])
    return float(np.sum(g * g))


def _refine_candidate(t: OctupolarTensor, theta1: float, theta2: float, step1: float, step2: float):
    for _ in range(6):
        theta1 = minimize_scalar(
            lambda v: _gradient_sq(t, v, theta2),
            bounds=(max(theta1 - 2 * step1, -POLE_SWITCH), min(theta1 + 2 * step1, POLE_SWITCH)),
            method="bounded",
            options={"xatol": 1e-12},
        ).x
        theta2 = minimize_scalar(
            lambda v: _gradient_sq(t, theta1, v),
            bounds=(theta2 - 2 * step2, theta2 + 2 * step2),
            method="bounded",
            options={"xatol": 1e-12},
        ).x
    polished = root(lambda v: spherical_gradient(t, SphericalPoint(v[0], v[1])), [theta1, theta2], method="hybr")
    if polished.success and abs(polished.x[0]) < math.pi / 2:
        theta1, theta2 = polished.x
    return float(theta1), float(theta2)


def _discrete_hessian(t: OctupolarTensor, x: np.ndarray, h: float = 1e-4) -> np.ndarray:
    location = SphericalPoint.from_cartesian(x)
    if location.is_polar():
        return cartesian_chart_hessian(t, x)

    def f(d1, d2):
        return float(potential_array(t.full, to_cartesian(location.theta1 + d1, location.theta2 + d2)))

    f0 = f(0, 0)
    h11 = (f(h, 0) - 2 * f0 + f(-h, 0)) / h**2
    h22 = (f(0, h) - 2 * f0 + f(0, -h)) / h**2
    h12 = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)
    return np.array([[h11, h12], [h12, h22]])


def _oracle_circles(t: OctupolarTensor, theta1: np.ndarray, values: np.ndarray) -> list[CriticalCircle]:
    flat = np.ptp(values, axis=1) < 1e-12
    profile = values.mean(axis=1)
    circles = []
    for i in range(1, len(theta1) - 1):
        if not (flat[i - 1] and flat[i] and flat[i + 1]):
            continue
        if (profile[i] - profile[i - 1]) * (profile[i + 1] - profile[i]) >= 0:
            continue
        sign = 1.0 if profile[i] > profile[i - 1] else -1.0
        best = minimize_scalar(
            lambda v: -sign * float(potential_array(t.full, to_cartesian(v, 0.0))),
            bounds=(theta1[i - 1], theta1[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        lat = float(best.x)
        h = 1e-4
        curvature = sum(
            c * float(potential_array(t.full, to_cartesian(lat + d, 0.0)))
            for c, d in ((1.0, h), (-2.0, 0.0), (1.0, -h))
        ) / (h * h)
        circles.append(CriticalCircle(theta1=lat, value=-sign * float(best.fun), hessian_eig=curvature))
    return circles


def oracle_spectrum(
    p: OrientedParams, n_lat: int = 256, n_lon: int = 512, cfg: SolverConfig | None = None
) -> SpectrumReport:
    """Brute-force spectrum from a dense grid, kept independent of the Newton search."""
    cfg = cfg or get_default_config()
    t = params_tensor(p)
    step1, step2 = math.pi / n_lat, 2 * math.pi / n_lon
    theta1 = -math.pi / 2 + (np.arange(n_lat) + 0.5) * step1
    theta2 = -math.pi + np.arange(n_lon) * step2
    t1, t2 = np.meshgrid(theta1, theta2, indexing="ij")
    values = potential_array(t.full, to_cartesian(t1, t2))

    circles = _oracle_circles(t, theta1, values)
    flat = np.ptp(values, axis=1) < 1e-12

    refined = [np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])]
    for i, j in _oracle_candidates(values):
        if flat[i]:
            continue
        lat, lon = _refine_candidate(t, theta1[i], theta2[j], step1, step2)
        x = to_cartesian(lat, lon)
        if _gradient_sq(t, lat, lon) < 1e-16:
            refined.append(x)
    found = unique_directions(np.array(refined), 1e-5)

    points = []
    for x in found:
        eigs = np.linalg.eigvalsh(_discrete_hessian(t, x))
        known = morse_type_from_eigs(eigs, 1e-5)
        if known is None:
            index = loop_index(t, x, cfg.winding_radius, cfg.winding_samples)
            known = (MorseType.DEGENERATE_EXTREMUM if index == 1 else MorseType.DEGENERATE_SADDLE, index)
        g = riemannian_gradient(t.full, x[None, :])
        points.append(
            CriticalPoint(
                location=SphericalPoint.from_cartesian(x),
                value=float(potential_array(t.full, x)),
                hessian_eigs=(float(eigs[0]), float(eigs[1])),
                morse_type=known[0],
                index=known[1],
                residual=float(np.linalg.norm(g)),
            )
        )
    return build_report(p, points, cfg, circles)
