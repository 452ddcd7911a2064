"""
Stratum membership of oriented parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from core.orientation import OrientedParams
from core.tensor import wrap_angle


TETRAHEDRAL_K = 1.0 / math.sqrt(2.0)

# Representative chi of each reflection plane family and its name.
PLANE_ANGLES = {
    "P0": (math.pi / 2, -math.pi / 2),
    "P+": (math.pi / 6, -5 * math.pi / 6),
    "P-": (-math.pi / 6, 5 * math.pi / 6),
}


class Stratum(str, Enum):
    BULK = "Bulk"
    CENTER = "Center"
    DISK = "Disk"
    AXIS = "Axis"
    TETRAHEDRAL = "Tetrahedral"
    REFLECTION_PLANE = "ReflectionPlane"


@dataclass(frozen=True)
class StratumLabel:
    stratum: Stratum
    plane: str | None = None

    @property
    def name(self) -> str:
        if self.stratum is Stratum.REFLECTION_PLANE:
            return f"{self.stratum.value}({self.plane})"
        return self.stratum.value


def plane_of(chi: float, tol: float) -> tuple[str, float] | None:
    """Reflection plane family containing chi and its exact angle."""
    for name, angles in PLANE_ANGLES.items():
        for angle in angles:
            if abs(float(wrap_angle(chi - angle))) <= tol:
                return name, angle
    return None


def classify_stratum(p: OrientedParams, tol: float = 1e-9) -> StratumLabel:
    on_axis = p.rho <= tol
    on_disk = abs(p.k) <= tol
    if on_axis and on_disk:
        return StratumLabel(Stratum.CENTER)
    if on_disk:
        return StratumLabel(Stratum.DISK)
    if on_axis:
        if abs(abs(p.k) - TETRAHEDRAL_K) <= tol:
            return StratumLabel(Stratum.TETRAHEDRAL)
        return StratumLabel(Stratum.AXIS)
    found = plane_of(p.chi, tol)
    if found is not None:
        return StratumLabel(Stratum.REFLECTION_PLANE, found[0])
    return StratumLabel(Stratum.BULK)
