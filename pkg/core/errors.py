"""
Domain errors raised by the octupolar core.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class OctupolarError(RuntimeError):
    pass


@dataclass
class OutsideCylinder(OctupolarError):
    rho: float

    def __str__(self) -> str:
        return f"rho={self.rho!r} lies outside the admissible cylinder 0 <= rho <= 2"


@dataclass
class ZeroTensor(OctupolarError):
    norm: float

    def __str__(self) -> str:
        return f"tensor is identically zero (component norm {self.norm:.3e})"


@dataclass
class NotUnitVector(OctupolarError):
    norm: float

    def __str__(self) -> str:
        return f"expected a unit vector, got norm {self.norm!r}"


@dataclass
class PolarChart(OctupolarError):
    theta1: float

    def __str__(self) -> str:
        return (
            f"angular chart is singular at theta1={self.theta1!r}; "
            "use the Cartesian pole chart"
        )


@dataclass
class NonPositiveK(OctupolarError):
    k: float

    def __str__(self) -> str:
        return f"K must be positive on the axis stratum, got {self.k!r}"


@dataclass
class NonConvergence(OctupolarError):
    failed: int
    total: int
    worst_residual: float
    residuals: list[float] = field(default_factory=list)

    def __str__(self) -> str:
        return (
            f"Newton search failed for {self.failed}/{self.total} seeds "
            f"(worst gradient residual {self.worst_residual:.3e})"
        )


@dataclass
class NotCritical(OctupolarError):
    gradient_norm: float

    def __str__(self) -> str:
        return f"point is not critical: gradient norm {self.gradient_norm:.3e}"


@dataclass
class LoopHitsSingularity(OctupolarError):
    gradient_norm: float

    def __str__(self) -> str:
        return (
            f"winding loop passes through a zero of the gradient "
            f"(|grad| = {self.gradient_norm:.3e}); shrink the radius"
        )


@dataclass
class NotDegenerate(OctupolarError):
    min_eig: float

    def __str__(self) -> str:
        return f"critical point is non-degenerate (smallest |Hessian eigenvalue| {self.min_eig:.3e})"


@dataclass
class CountAmbiguous(OctupolarError):
    k: float
    rho: float
    chi: float
    counts: list[int] = field(default_factory=list)

    def __str__(self) -> str:
        return (
            f"repeated solves at K={self.k!r}, rho={self.rho!r}, chi={self.chi!r} "
            f"disagree on the critical-point count: {self.counts}"
        )
