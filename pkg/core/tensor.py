"""
Octupolar tensors, the cubic potential and its restriction to the unit sphere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, fields
from functools import cached_property

import numpy as np

from core.errors import NotUnitVector, PolarChart


POLAR_CHART_LIMIT = math.pi / 2 - 1e-6
POLE_SWITCH = math.pi / 2 - 1e-3


def _fill_symmetric(array: np.ndarray, index: tuple[int, int, int], value: float) -> None:
    for perm in set(itertools.permutations(index)):
        array[perm] = value


@dataclass(frozen=True)
class OctupolarTensor:
    alpha0: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    beta3: float = 0.0

    @classmethod
    def from_vector(cls, values) -> OctupolarTensor:
        vector = [float(v) for v in values]
        if len(vector) != 7:
            raise ValueError(f"expected 7 components, got {len(vector)}")
        return cls(*vector)

    @classmethod
    def from_array(cls, array) -> OctupolarTensor:
        a = np.asarray(array, dtype=float)
        return cls(
            alpha0=float(a[0, 1, 2]),
            alpha1=float(a[0, 0, 0]),
            alpha2=float(a[1, 1, 1]),
            alpha3=float(a[2, 2, 2]),
            beta1=float(a[0, 1, 1]),
            beta2=float(a[1, 2, 2]),
            beta3=float(a[2, 0, 0]),
        )

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=float)

    def norm(self) -> float:
        return float(np.max(np.abs(self.as_vector())))

    @cached_property
    def full(self) -> np.ndarray:
        return assemble_full(self)

    def rotated(self, q) -> OctupolarTensor:
        """Tensor whose potential at x equals this potential at q @ x."""
        q = np.asarray(q, dtype=float)
        return OctupolarTensor.from_array(np.einsum("abc,ai,bj,ck->ijk", self.full, q, q, q))

    def scaled(self, factor: float) -> OctupolarTensor:
        return OctupolarTensor.from_vector(self.as_vector() * factor)


def assemble_full(t: OctupolarTensor) -> np.ndarray:
    a = np.zeros((3, 3, 3))
    _fill_symmetric(a, (0, 1, 2), t.alpha0)
    _fill_symmetric(a, (0, 0, 0), t.alpha1)
    _fill_symmetric(a, (1, 1, 1), t.alpha2)
    _fill_symmetric(a, (2, 2, 2), t.alpha3)
    _fill_symmetric(a, (0, 1, 1), t.beta1)
    _fill_symmetric(a, (1, 2, 2), t.beta2)
    _fill_symmetric(a, (2, 0, 0), t.beta3)
    _fill_symmetric(a, (0, 2, 2), -(t.alpha1 + t.beta1))
    _fill_symmetric(a, (1, 0, 0), -(t.alpha2 + t.beta2))
    _fill_symmetric(a, (2, 1, 1), -(t.alpha3 + t.beta3))
    return a


@dataclass(frozen=True)
class SphericalPoint:
    theta1: float
    theta2: float

    def cartesian(self) -> np.ndarray:
        return to_cartesian(self.theta1, self.theta2)

    @classmethod
    def from_cartesian(cls, p) -> SphericalPoint:
        theta1, theta2 = to_angles(np.asarray(p, dtype=float))
        return cls(float(theta1), float(theta2))

    def is_polar(self, limit: float = POLE_SWITCH) -> bool:
        return abs(self.theta1) > limit


def wrap_angle(angle):
    """Map angles into [-pi, pi)."""
    return (np.asarray(angle) + math.pi) % (2 * math.pi) - math.pi


def to_cartesian(theta1, theta2) -> np.ndarray:
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    c1 = np.cos(theta1)
    return np.stack([c1 * np.cos(theta2), c1 * np.sin(theta2), np.sin(theta1)], axis=-1)


def to_angles(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float)
    p = p / np.linalg.norm(p, axis=-1, keepdims=True)
    theta1 = np.arcsin(np.clip(p[..., 2], -1.0, 1.0))
    planar = np.hypot(p[..., 0], p[..., 1])
    theta2 = np.where(planar < 1e-12, 0.0, np.arctan2(p[..., 1], p[..., 0]))
    return theta1, theta2


def _contract1(a: np.ndarray, p: np.ndarray) -> np.ndarray:
    """A(p) as a (..., 3, 3) matrix."""
    return np.tensordot(p, a, axes=([-1], [2]))


def contract2(a: np.ndarray, p: np.ndarray) -> np.ndarray:
    """A(p, p), the left side of the eigenvector equations."""
    return np.einsum("...ij,...j->...i", _contract1(a, p), p)


def potential_array(a: np.ndarray, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.einsum("...i,...i->...", contract2(a, p), p)


def cartesian_gradient(a: np.ndarray, p) -> np.ndarray:
    return 3.0 * contract2(a, np.asarray(p, dtype=float))


def cartesian_second(a: np.ndarray, p) -> np.ndarray:
    return 6.0 * _contract1(a, np.asarray(p, dtype=float))


def potential(t: OctupolarTensor, p) -> float | np.ndarray:
    values = potential_array(t.full, p)
    return float(values) if np.ndim(values) == 0 else values


def _frame_derivatives(theta1, theta2):
    s1, c1 = np.sin(theta1), np.cos(theta1)
    s2, c2 = np.sin(theta2), np.cos(theta2)
    zero = np.zeros_like(s1 * s2)
    p1 = np.stack([-s1 * c2, -s1 * s2, c1 + zero], axis=-1)
    p2 = np.stack([-c1 * s2, c1 * c2, zero], axis=-1)
    p11 = np.stack([-c1 * c2, -c1 * s2, -s1 + zero], axis=-1)
    p12 = np.stack([s1 * s2, -s1 * c2, zero], axis=-1)
    p22 = np.stack([-c1 * c2, -c1 * s2, zero], axis=-1)
    return p1, p2, p11, p12, p22


def angular_derivatives(a: np.ndarray, theta1, theta2) -> tuple[np.ndarray, np.ndarray]:
    """Gradient (..., 2) and Hessian (..., 2, 2) of the angular potential."""
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    p = to_cartesian(theta1, theta2)
    g = cartesian_gradient(a, p)
    h = cartesian_second(a, p)
    p1, p2, p11, p12, p22 = _frame_derivatives(theta1, theta2)

    def dot(u, v):
        return np.einsum("...i,...i->...", u, v)

    def quad(u, v):
        return np.einsum("...i,...ij,...j->...", u, h, v)

    grad = np.stack([dot(g, p1), dot(g, p2)], axis=-1)
    h11 = quad(p1, p1) + dot(g, p11)
    h12 = quad(p1, p2) + dot(g, p12)
    h22 = quad(p2, p2) + dot(g, p22)
    hess = np.stack([np.stack([h11, h12], axis=-1), np.stack([h12, h22], axis=-1)], axis=-2)
    return grad, hess


def spherical_potential(t: OctupolarTensor, sp: SphericalPoint) -> float:
    return float(potential_array(t.full, sp.cartesian()))


def spherical_gradient(t: OctupolarTensor, sp: SphericalPoint) -> np.ndarray:
    grad, _ = angular_derivatives(t.full, sp.theta1, sp.theta2)
    return grad


def spherical_hessian(t: OctupolarTensor, sp: SphericalPoint) -> np.ndarray:
    if abs(sp.theta1) > POLAR_CHART_LIMIT:
        raise PolarChart(sp.theta1)
    _, hess = angular_derivatives(t.full, sp.theta1, sp.theta2)
    return hess


def spherical_third_derivatives(t: OctupolarTensor, sp: SphericalPoint) -> np.ndarray:
    """All third partial derivatives of the angular potential, shape (2, 2, 2)."""
    if abs(sp.theta1) > POLAR_CHART_LIMIT:
        raise PolarChart(sp.theta1)
    a = t.full
    th1, th2 = sp.theta1, sp.theta2
    s1, c1, s2, c2 = math.sin(th1), math.cos(th1), math.sin(th2), math.cos(th2)
    p = to_cartesian(th1, th2)
    g = cartesian_gradient(a, p)
    h = cartesian_second(a, p)
    p1, p2, p11, p12, p22 = (np.asarray(v) for v in _frame_derivatives(th1, th2))

    first = [p1, p2]
    second = [[p11, p12], [p12, p22]]
    third = np.zeros((2, 2, 2, 3))
    third[0, 0, 0] = (s1 * c2, s1 * s2, -c1)
    third[0, 0, 1] = third[0, 1, 0] = third[1, 0, 0] = (c1 * s2, -c1 * c2, 0.0)
    third[0, 1, 1] = third[1, 0, 1] = third[1, 1, 0] = (s1 * c2, s1 * s2, 0.0)
    third[1, 1, 1] = (c1 * s2, -c1 * c2, 0.0)

    out = np.zeros((2, 2, 2))
    for i, j, k in itertools.product(range(2), repeat=3):
        out[i, j, k] = (
            6.0 * np.einsum("abc,a,b,c->", a, first[i], first[j], first[k])
            + second[i][j] @ h @ first[k]
            + second[i][k] @ h @ first[j]
            + second[j][k] @ h @ first[i]
            + g @ third[i, j, k]
        )
    return out


def cartesian_chart_hessian(t: OctupolarTensor, p) -> np.ndarray:
    """Hessian of the potential in the chart z = +-sqrt(1 - x^2 - y^2)."""
    p = np.asarray(p, dtype=float)
    x, y, z = p
    if abs(z) < 1e-8:
        raise PolarChart(0.0)
    g = cartesian_gradient(t.full, p)
    h = cartesian_second(t.full, p)
    zx, zy = -x / z, -y / z
    zxx = -1.0 / z - x * x / z**3
    zxy = -x * y / z**3
    zyy = -1.0 / z - y * y / z**3
    fxx = h[0, 0] + 2 * h[0, 2] * zx + h[2, 2] * zx * zx + g[2] * zxx
    fxy = h[0, 1] + h[0, 2] * zy + h[1, 2] * zx + h[2, 2] * zx * zy + g[2] * zxy
    fyy = h[1, 1] + 2 * h[1, 2] * zy + h[2, 2] * zy * zy + g[2] * zyy
    return np.array([[fxx, fxy], [fxy, fyy]])


def chart_hessian(t: OctupolarTensor, sp: SphericalPoint) -> np.ndarray:
    if sp.is_polar():
        return cartesian_chart_hessian(t, sp.cartesian())
    return spherical_hessian(t, sp)


def eigen_residual(t: OctupolarTensor, p, lam: float, unit_tol: float = 1e-10) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    norm = float(np.linalg.norm(p))
    if abs(norm - 1.0) > unit_tol:
        raise NotUnitVector(norm)
    return contract2(t.full, p) - lam * p
