"""
Reduction of general octupolar tensors to the oriented (K, rho, chi) form.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.errors import OutsideCylinder, ZeroTensor
from core.sphere import grid_seeds, newton_search, tangent_frame, unique_directions
from core.tensor import OctupolarTensor, cartesian_gradient, contract2, potential_array, wrap_angle


logger = logging.getLogger(__name__)

RHO_MAX = 2.0
CHI_LOW = -math.pi / 2
CHI_HIGH = -math.pi / 6
DOMAIN_EPS = 1e-12


@dataclass(frozen=True)
class OrientedParams:
    k: float
    rho: float
    chi: float

    def __post_init__(self) -> None:
        rho = float(self.rho)
        if rho < -DOMAIN_EPS or rho > RHO_MAX + DOMAIN_EPS or not math.isfinite(rho):
            raise OutsideCylinder(rho)
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "rho", min(max(rho, 0.0), RHO_MAX))
        object.__setattr__(self, "chi", float(wrap_angle(self.chi)))

    def in_domain(self, tol: float = 1e-9) -> bool:
        return self.k >= -tol and CHI_LOW - tol <= self.chi <= CHI_HIGH + tol

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.k, self.rho, self.chi)


@dataclass(frozen=True)
class OrbitMap:
    """Longitude remap theta2 -> sign * theta2 + shift."""

    sign: int = 1
    shift: float = 0.0

    def apply(self, theta2):
        return wrap_angle(self.sign * np.asarray(theta2) + self.shift)

    def then(self, other: OrbitMap) -> OrbitMap:
        return OrbitMap(self.sign * other.sign, other.sign * self.shift + other.shift)


def gamma1(p: OrientedParams) -> tuple[OrientedParams, OrbitMap]:
    return OrientedParams(-p.k, p.rho, p.chi), OrbitMap(1, math.pi)


def gamma2(p: OrientedParams) -> tuple[OrientedParams, OrbitMap]:
    return OrientedParams(-p.k, p.rho, -p.chi - math.pi), OrbitMap(-1, 0.0)


def gamma3(p: OrientedParams) -> tuple[OrientedParams, OrbitMap]:
    return OrientedParams(p.k, p.rho, p.chi + 2 * math.pi / 3), OrbitMap(1, 2 * math.pi / 3)


def canonical_form_with_map(p: OrientedParams) -> tuple[OrientedParams, OrbitMap]:
    """Fundamental-domain representative plus the longitude remap onto it.

    A critical point at theta2 for p sits at orbit.apply(theta2) for the result.
    """
    orbit = OrbitMap()
    if p.k < 0:
        p, step = gamma1(p)
        orbit = orbit.then(step)
    for _ in range(3):
        if CHI_LOW - DOMAIN_EPS <= p.chi < math.pi / 6 - DOMAIN_EPS:
            break
        p, step = gamma3(p)
        orbit = orbit.then(step)
    if p.chi > CHI_HIGH + DOMAIN_EPS:
        for step_fn in (gamma2, gamma1, gamma3):
            p, step = step_fn(p)
            orbit = orbit.then(step)
    if p.k == 0.0:
        p = OrientedParams(0.0, p.rho, p.chi)
    return p, orbit


def canonical_form(p: OrientedParams) -> OrientedParams:
    return canonical_form_with_map(p)[0]


def from_cylinder(k: float, rho: float, chi: float) -> OctupolarTensor:
    if not 0.0 <= rho <= RHO_MAX:
        raise OutsideCylinder(rho)
    if k < 0:
        logger.debug("folding K=%s onto K >= 0 by the half-turn about the z axis", k)
        k = -k
    return OctupolarTensor(
        alpha0=0.5 * rho * math.cos(chi),
        alpha2=k,
        alpha3=1.0,
        beta3=-0.5 + 0.5 * rho * math.sin(chi),
    )


def params_tensor(p: OrientedParams) -> OctupolarTensor:
    return from_cylinder(p.k, p.rho, p.chi)


def northpole_hessian(p: OrientedParams) -> np.ndarray:
    s, c = math.sin(p.chi), math.cos(p.chi)
    return 3.0 * np.array([[p.rho * s - 2.0, p.rho * c], [p.rho * c, -p.rho * s - 2.0]])


def northpole_eigenvalues(rho: float) -> tuple[float, float]:
    return (-3.0 * (2.0 + rho), -3.0 * (2.0 - rho))


@dataclass
class OrientationResult:
    params: OrientedParams
    rotation: np.ndarray
    scale: float
    absolute_max: bool

    def reconstruct(self) -> OctupolarTensor:
        return params_tensor(self.params).rotated(self.rotation).scaled(self.scale)


def _global_maxima(t: OctupolarTensor, cfg: SolverConfig) -> tuple[np.ndarray, np.ndarray]:
    a = t.full
    batch = newton_search(a, grid_seeds(cfg.seed_grid), cfg)
    ok = batch.converged(cfg.accept_tol)
    points = unique_directions(batch.points[ok], cfg.dedupe_radius)
    values = potential_array(a, points)
    order = np.argsort(-values, kind="stable")
    return points[order], values[order]


def _is_local_max(a: np.ndarray, p: np.ndarray) -> bool:
    e1, e2 = tangent_frame(p[None, :])
    g = cartesian_gradient(a, p)
    h = 6.0 * np.tensordot(p, a, axes=([0], [2])) - float(g @ p) * np.eye(3)
    frame = np.stack([e1[0], e2[0]], axis=1)
    eigs = np.linalg.eigvalsh(frame.T @ h @ frame)
    return bool(eigs.max() <= 1e-9 * max(1.0, np.abs(eigs).max()))


def _equator_angles(a: np.ndarray, u: np.ndarray, v: np.ndarray) -> list[float]:
    c0 = float(potential_array(a, u))
    c3 = float(potential_array(a, v))
    c1 = 3.0 * float(contract2(a, u) @ v)
    c2 = 3.0 * float(contract2(a, v) @ u)
    scale = max(abs(c0), abs(c1), abs(c2), abs(c3))
    if scale < 1e-13:
        return []
    angles = [math.atan(float(r.real)) for r in np.roots([c3, c2, c1, c0]) if abs(r.imag) < 1e-7 * (1 + abs(r))]
    if abs(c3) < 1e-13 * scale:
        angles.append(math.pi / 2)

    def f(phi):
        e = math.cos(phi) * u + math.sin(phi) * v
        return float(potential_array(a, e))

    def df(phi):
        e = math.cos(phi) * u + math.sin(phi) * v
        n = -math.sin(phi) * u + math.cos(phi) * v
        return 3.0 * float(contract2(a, e) @ n)

    polished = []
    for phi in angles:
        for _ in range(4):
            slope = df(phi)
            if abs(slope) < 1e-14:
                break
            phi -= f(phi) / slope
        polished.extend([phi, phi + math.pi])
    return polished


def _params_from_oriented(b: OctupolarTensor) -> OrientedParams:
    k = b.alpha2
    x = 2.0 * b.alpha0
    y = 2.0 * b.beta3 + 1.0
    rho = math.hypot(x, y)
    chi = math.atan2(y, x) if rho > 1e-15 else -math.pi / 2
    return OrientedParams(k, min(rho, RHO_MAX), chi)


def _domain_violation(p: OrientedParams) -> float:
    return max(0.0, -p.k) + max(0.0, CHI_LOW - p.chi) + max(0.0, p.chi - CHI_HIGH)


def orient(t: OctupolarTensor, cfg: SolverConfig | None = None) -> OrientationResult:
    """Rotate a global maximum to the North Pole and scale its eigenvalue to 1.

    The returned rotation R satisfies t == scale * params_tensor(params).rotated(R).
    """
    cfg = cfg or get_default_config()
    norm = t.norm()
    if norm < 1e-14:
        raise ZeroTensor(norm)

    a = t.full
    points, values = _global_maxima(t, cfg)
    if values.size == 0 or values[0] <= 0:
        raise ZeroTensor(norm)
    top = values[0]
    ties = [i for i in range(values.size) if values[i] > top - 1e-12 * max(1.0, abs(top))]
    maxima = [i for i in ties if _is_local_max(a, points[i])] or ties
    theta1 = np.arcsin(np.clip(points[maxima, 2], -1, 1))
    theta2 = np.arctan2(points[maxima, 1], points[maxima, 0])
    # Equal-height maxima: the northernmost wins, then the smallest longitude.
    pick = maxima[int(np.lexsort((np.round(theta2, 9), -np.round(theta1, 9)))[0])]
    p = points[pick]
    lam = float(values[pick])
    others = [values[i] for i in range(values.size) if i != pick and _is_local_max(a, points[i])]
    absolute_max = all(v < lam - 1e-12 * max(1.0, lam) for v in others)

    helper = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = helper - (helper @ p) * p
    u /= np.linalg.norm(u)
    v = np.cross(p, u)

    phis = _equator_angles(a, u, v)
    if not phis:
        phis = [0.0, math.pi]

    candidates = []
    for phi in phis:
        e1 = math.cos(phi) * u + math.sin(phi) * v
        for handed in (1, -1):
            e2 = handed * np.cross(p, e1)
            rotation = np.vstack([e1, e2, p])
            b = t.rotated(rotation.T).scaled(1.0 / lam)
            params = _params_from_oriented(b)
            candidates.append((_domain_violation(params), abs(float(wrap_angle(phi))), handed != 1, params, rotation))

    if all(c[0] > 1e-9 for c in candidates) and abs(candidates[0][3].k) < 1e-9:
        # Flat equator: a planar rotation moves chi freely, so aim it at the domain edge.
        base = candidates[0][3]
        extra = []
        for delta in ((base.chi - CHI_LOW) / 2, (CHI_LOW - base.chi) / 2):
            phi = delta
            e1 = math.cos(phi) * u + math.sin(phi) * v
            for handed in (1, -1):
                rotation = np.vstack([e1, handed * np.cross(p, e1), p])
                params = _params_from_oriented(t.rotated(rotation.T).scaled(1.0 / lam))
                extra.append((_domain_violation(params), abs(phi), handed != 1, params, rotation))
        candidates.extend(extra)

    candidates.sort(key=lambda c: (round(c[0], 9), c[1], c[2]))
    _, _, _, params, rotation = candidates[0]
    logger.debug("oriented tensor: K=%.12g rho=%.12g chi=%.12g scale=%.12g", *params.as_tuple(), lam)
    return OrientationResult(params=params, rotation=rotation, scale=lam, absolute_max=absolute_max)
