"""
Tracing of the separatrix between the three-maxima and four-maxima phases.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable

import numpy as np
from scipy.optimize import fsolve

from config.settings import SolverConfig, get_default_config
from core.errors import CountAmbiguous, OctupolarError
from core.orientation import CHI_HIGH, RHO_MAX, OrientedParams, canonical_form, params_tensor
from core.solver import closed_form_spectrum, locate_critical_points
from core.sphere import unique_directions
from core.strata import classify_stratum, plane_rotation, reflection_plane_points_at
from core.tensor import SphericalPoint, angular_derivatives, chart_hessian


logger = logging.getLogger(__name__)

ABOVE_COUNT = 14
CLUSTER_RADIUS = 5e-3
POLISH_WINDOW = 10.0
SECTOR_EDGE_TOL = 1e-9
RIM_WINDOW = 0.05

TAGS = {8: "L1", 10: "S1", 12: "S2"}


@dataclass(frozen=True)
class SectionSample:
    rho: float
    k_crit: float | None
    count: int | None = None
    tag: str = ""
    polished: bool = False
    band: tuple[float, float] | None = None

    @property
    def k_s1(self) -> float | None:
        return self.k_crit if self.tag in ("S1", "L2") else None

    @property
    def k_s2(self) -> tuple[float | None, float | None]:
        if self.band is not None:
            return self.band
        if self.tag == "S2":
            return self.k_crit, self.k_crit
        return None, None

    def to_dict(self) -> dict[str, Any]:
        inner, outer = self.k_s2
        return {
            "rho": self.rho,
            "K_crit": self.k_crit,
            "count": self.count,
            "tag": self.tag,
            "polished": self.polished,
            "K_s1": self.k_s1,
            "K_s2_inner": inner,
            "K_s2_outer": outer,
        }


@dataclass
class SeparatrixSection:
    chi: float
    samples: list[SectionSample] = field(default_factory=list)
    cusp: tuple[float, float] | None = None

    def curve(self) -> tuple[np.ndarray, np.ndarray]:
        valid = [s for s in self.samples if s.k_crit is not None]
        return np.array([s.rho for s in valid]), np.array([s.k_crit for s in valid])

    def to_dict(self) -> dict[str, Any]:
        return {
            "chi": self.chi,
            "cusp": None if self.cusp is None else {"rho": self.cusp[0], "K": self.cusp[1]},
            "samples": [s.to_dict() for s in self.samples],
        }


@dataclass
class SeparatrixSurface:
    sections: list[SeparatrixSection]
    cusp_line: list[tuple[float, float, float]]
    boundary_line: list[tuple[float, float, float]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "sections": [s.to_dict() for s in self.sections],
            "L1": [{"K": k, "rho": rho, "chi": chi} for k, rho, chi in self.cusp_line],
            "L2": [{"K": k, "rho": rho, "chi": chi} for k, rho, chi in self.boundary_line],
        }


def separatrix_tag(count: int, rho: float) -> str:
    """Label of a point of the separatrix from its number of critical points."""
    if count == 10 and rho >= RHO_MAX - SECTOR_EDGE_TOL:
        return "L2"
    return TAGS.get(count, "")


def sector_chi(chi: float) -> float:
    """Representative of chi in the fundamental sector [-pi/2, -pi/6]."""
    return canonical_form(OrientedParams(1.0, 1.0, chi)).chi


def _section_points(k: float, rho: float, chi: float, cfg: SolverConfig, **search: Any) -> np.ndarray:
    """Critical points from a closed form where one applies, else from the Newton search."""
    if plane_rotation(chi, cfg.stratum_tol) is not None:
        return reflection_plane_points_at(k, rho, chi, cfg)
    p = OrientedParams(k, rho, chi)
    closed = closed_form_spectrum(p, classify_stratum(canonical_form(p), cfg.stratum_tol), cfg)
    if closed is not None:
        return np.array([cp.cartesian() for cp in closed[0]]).reshape(-1, 3)
    return locate_critical_points(p, cfg, **search)


class _Counter:
    """Critical-point counts along one section, warm-started from the last solve."""

    def __init__(self, rho: float, chi: float, cfg: SolverConfig):
        self.rho = rho
        self.chi = chi
        self.cfg = cfg
        self.warm: np.ndarray | None = None
        self.seen: dict[float, int] = {}

    def points(self, k: float, *, grid=None, offset: float = 0.0) -> np.ndarray:
        found = _section_points(
            k, self.rho, self.chi, self.cfg,
            grid=grid or self.cfg.trace_seed_grid, grid_offset=offset, extra_seeds=self.warm,
        )
        self.warm = found
        return found

    def __call__(self, k: float) -> int:
        if k not in self.seen:
            self.seen[k] = len(self.points(k))
        return self.seen[k]


def _bracket(counter: _Counter, cfg: SolverConfig, warm_k: float | None) -> tuple[float, float] | None:
    lo, hi = 0.0, cfg.k_upper
    if warm_k is not None:
        width = 0.05
        while width < cfg.k_upper:
            a, b = max(0.0, warm_k - width), min(cfg.k_upper, warm_k + width)
            if counter(a) < ABOVE_COUNT <= counter(b):
                return a, b
            width *= 2.0
    if counter(hi) < ABOVE_COUNT:
        return None
    if counter(lo) >= ABOVE_COUNT:
        return lo, lo
    return lo, hi


def _confirm(counter: _Counter, lo: float, hi: float, cfg: SolverConfig) -> None:
    """Re-solve the bracket ends on a shifted seed grid; raise if the ordering breaks."""
    for k, expect_above in ((lo, False), (hi, True)):
        counts = [counter(k), len(counter.points(k, offset=0.5))]
        if all((c >= ABOVE_COUNT) == expect_above for c in counts):
            continue
        counts.append(len(counter.points(k, grid=cfg.seed_grid)))
        if (counts[-1] >= ABOVE_COUNT) != expect_above:
            raise CountAmbiguous(k, counter.rho, counter.chi, counts)
        logger.debug("count at K=%.9g resolved on the full seed grid: %s", k, counts)


def _bordered_residual(v: np.ndarray, rho: float, chi: float) -> np.ndarray:
    theta1, theta2, k = v
    a = params_tensor(OrientedParams(k, rho, chi)).full
    grad, hess = angular_derivatives(a, theta1, theta2)
    return np.array([grad[0], grad[1], np.linalg.det(hess)])


def polish_fold(points: np.ndarray, k: float, rho: float, chi: float) -> tuple[float, SphericalPoint] | None:
    """Solve {grad = 0, det H = 0} for (theta1, theta2, K) from the most degenerate point."""
    tensor = params_tensor(OrientedParams(k, rho, chi))
    best, best_det = None, math.inf
    for x in points:
        location = SphericalPoint.from_cartesian(x)
        if location.is_polar() or location.theta1 < -math.pi / 2 + 1e-3:
            continue
        h = chart_hessian(tensor, location)
        det = abs(float(np.linalg.det(h))) / max(1.0, float(np.abs(h).max()) ** 2)
        if det < best_det:
            best, best_det = location, det
    if best is None:
        return None
    solution, info, ier, _ = fsolve(
        _bordered_residual, [best.theta1, best.theta2, k], args=(rho, chi), full_output=True, xtol=1e-13
    )
    if ier != 1 or abs(solution[0]) >= math.pi / 2:
        return None
    return float(solution[2]), SphericalPoint(float(solution[0]), float(solution[1]))


def surface_count(k: float, rho: float, chi: float, cfg: SolverConfig) -> int:
    """Number of critical points on the separatrix, merging the pairs about to split."""
    return len(unique_directions(_section_points(k, rho, chi, cfg), CLUSTER_RADIUS))


def _trace_rho(rho: float, chi: float, cfg: SolverConfig, warm_k: float | None) -> SectionSample:
    if rho <= cfg.stratum_tol:
        return SectionSample(rho=rho, k_crit=0.0)
    counter = _Counter(rho, chi, cfg)
    bracket = _bracket(counter, cfg, warm_k)
    if bracket is None:
        logger.warning("no 14-point phase below K=%.3g at rho=%.6g chi=%.6g", cfg.k_upper, rho, chi)
        return SectionSample(rho=rho, k_crit=None)
    lo, hi = bracket
    while hi - lo > cfg.bracket_width:
        mid = 0.5 * (lo + hi)
        if counter(mid) >= ABOVE_COUNT:
            hi = mid
        else:
            lo = mid
    if lo > 0.0:
        _confirm(counter, lo, hi, cfg)
    k_crit = 0.5 * (lo + hi)

    band_ks = sorted(k for k, c in counter.seen.items() if c == 12)
    band = (band_ks[0], band_ks[-1]) if len(band_ks) >= 2 else None

    polished = False
    k_star = k_crit
    # The upper bracket end sits just past the fold; CLUSTER_RADIUS merges the pairs there.
    k_count = hi
    if k_crit < 2 * cfg.bracket_width:
        k_star = k_count = 0.0
    else:
        result = polish_fold(counter.points(hi), hi, rho, chi)
        if result is not None and abs(result[0] - k_crit) <= POLISH_WINDOW * cfg.bracket_width:
            k_star, polished = result[0], True

    try:
        count = surface_count(k_count, rho, chi, cfg)
    except OctupolarError as exc:
        logger.warning("on-surface count failed at rho=%.6g chi=%.6g: %s", rho, chi, exc)
        count = None
    tag = separatrix_tag(count, rho) if count is not None else ""
    return SectionSample(rho=rho, k_crit=k_star, count=count, tag=tag, polished=polished, band=band)


def _cusp(samples: list[SectionSample]) -> tuple[float, float] | None:
    for s in samples:
        if s.tag == "L1":
            return s.rho, s.k_crit
    tagged = [s for s in samples if s.tag in ("S1", "S2")]
    for before, after in zip(tagged, tagged[1:]):
        if before.tag == "S1" and after.tag == "S2":
            return 0.5 * (before.rho + after.rho), 0.5 * (before.k_crit + after.k_crit)
    if tagged and all(s.tag == "S1" for s in tagged):
        last = [s for s in samples if s.k_crit is not None][-1]
        if last.rho >= RHO_MAX - SECTOR_EDGE_TOL:
            return last.rho, last.k_crit
    return None


def trace_section(
    chi: float,
    rho_grid,
    cfg: SolverConfig | None = None,
    progress: Callable[[float, SectionSample], None] | None = None,
) -> SeparatrixSection:
    cfg = cfg or get_default_config()
    chi = sector_chi(chi)
    section = SeparatrixSection(chi=chi)
    warm_k = None
    for rho in sorted(float(r) for r in rho_grid):
        sample = _trace_rho(rho, chi, cfg, warm_k)
        section.samples.append(sample)
        if sample.k_crit is not None:
            warm_k = sample.k_crit
        if progress is not None:
            progress(rho, sample)
    section.cusp = _cusp(section.samples)
    return section


def _rim_tip(section: SeparatrixSection) -> float | None:
    """K of the traced curve at the rim, or its last sample within RIM_WINDOW of it."""
    near = [s for s in section.samples if s.k_crit is not None and s.rho >= RHO_MAX - RIM_WINDOW]
    return max(near, key=lambda s: s.rho).k_crit if near else None


def assemble_surface(
    sections: list[SeparatrixSection],
    count_fn: Callable[[float, float, float], int] | None = None,
) -> SeparatrixSurface:
    """Cusp line from the sections, boundary line from candidates whose on-surface count is 10."""
    if count_fn is None:
        count_fn = partial(surface_count, cfg=get_default_config())
    sections = sorted(sections, key=lambda s: s.chi)
    cusp_line = [(s.cusp[1], s.cusp[0], s.chi) for s in sections if s.cusp is not None]

    candidates = [(0.0, RHO_MAX, s.chi) for s in sections]
    edge = [s for s in sections if abs(s.chi - CHI_HIGH) <= SECTOR_EDGE_TOL]
    tip = _rim_tip(edge[0]) if edge else None
    if tip is not None:
        candidates += [(float(k), RHO_MAX, CHI_HIGH) for k in np.linspace(0.0, tip, 5)[1:]]

    boundary = []
    for k, rho, chi in candidates:
        try:
            count = count_fn(k, rho, chi)
        except OctupolarError as exc:
            logger.warning("boundary candidate K=%.6g rho=%.6g chi=%.6g dropped: %s", k, rho, chi, exc)
            continue
        if count == 10:
            boundary.append((k, rho, chi))
        else:
            logger.info("boundary candidate K=%.6g rho=%.6g chi=%.6g has %d points, dropped", k, rho, chi, count)
    for s in sections:
        boundary += [(x.k_crit, x.rho, s.chi) for x in s.samples if x.tag == "L2" and x.k_crit > 0.0]
    return SeparatrixSurface(sections=sections, cusp_line=cusp_line, boundary_line=boundary)


def trace_surface(chi_grid, rho_grid, cfg: SolverConfig | None = None) -> SeparatrixSurface:
    cfg = cfg or get_default_config()
    sections = [trace_section(chi, rho_grid, cfg) for chi in chi_grid]
    return assemble_surface(sections, partial(surface_count, cfg=cfg))
