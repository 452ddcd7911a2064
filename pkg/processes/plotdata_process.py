"""
Plot data process implementation
Builds contour grids and polar meshes of the potential with a critical-point marker layer
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from core.solver import SpectrumReport
from core.tensor import OctupolarTensor, potential_array, to_cartesian
from services.export import write_csv
from services.models import LogCallback


CONTOUR_HEADER = ["layer", "theta1", "theta2", "value", "type"]
POLAR_HEADER = ["layer", "x", "y", "z", "value", "type"]


@dataclass(frozen=True)
class Marker:
    """A critical point in the frame of the plotted tensor."""

    direction: np.ndarray
    value: float
    kind: str


def report_markers(report: SpectrumReport, rotation: np.ndarray | None = None, scale: float = 1.0) -> list[Marker]:
    """Markers of an oriented report, mapped back through the orienting rotation."""
    r = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
    markers = []
    for cp in report.points:
        markers.append(Marker(r.T @ cp.cartesian(), scale * cp.value, cp.morse_type.value))
    for circle in report.circles:
        for theta2 in np.linspace(-math.pi, math.pi, 36, endpoint=False):
            x = to_cartesian(circle.theta1, theta2)
            markers.append(Marker(r.T @ x, scale * circle.value, "CircleDegenerate"))
    return markers


def sphere_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Latitude and longitude nodes, poles and both longitude ends included."""
    n = max(2, int(resolution))
    theta1 = np.linspace(-math.pi / 2, math.pi / 2, n + 1)
    theta2 = np.linspace(-math.pi, math.pi, 2 * n + 1)
    return theta1, theta2


def contour_rows(t: OctupolarTensor, resolution: int, markers: list[Marker], degrees: bool = False) -> list[list]:
    theta1, theta2 = sphere_grid(resolution)
    t1, t2 = np.meshgrid(theta1, theta2, indexing="ij")
    values = potential_array(t.full, to_cartesian(t1, t2))
    convert = math.degrees if degrees else float
    rows = [
        ["grid", convert(theta1[i]), convert(theta2[j]), float(values[i, j]), ""]
        for i in range(theta1.size)
        for j in range(theta2.size)
    ]
    for m in markers:
        lat = math.asin(max(-1.0, min(1.0, float(m.direction[2]))))
        lon = math.atan2(float(m.direction[1]), float(m.direction[0]))
        rows.append(["critical", convert(lat), convert(lon), m.value, m.kind])
    return rows


def polar_rows(t: OctupolarTensor, resolution: int, markers: list[Marker]) -> list[list]:
    """Vertices of the surface Phi(e_r) e_r over a UV sphere grid."""
    theta1, theta2 = sphere_grid(resolution)
    t1, t2 = np.meshgrid(theta1, theta2, indexing="ij")
    directions = to_cartesian(t1, t2).reshape(-1, 3)
    values = potential_array(t.full, directions)
    vertices = directions * values[:, None]
    rows = [["grid", *map(float, v), float(value), ""] for v, value in zip(vertices, values)]
    for m in markers:
        rows.append(["critical", *map(float, m.value * m.direction), m.value, m.kind])
    return rows


def write_plotdata(
    t: OctupolarTensor,
    kind: str,
    resolution: int,
    output_path: str | Path,
    markers: list[Marker],
    *,
    degrees: bool = False,
    log_callback: LogCallback | None = None,
) -> Path:
    if kind == "contour":
        path = write_csv(output_path, CONTOUR_HEADER, contour_rows(t, resolution, markers, degrees))
    elif kind == "polar":
        path = write_csv(output_path, POLAR_HEADER, polar_rows(t, resolution, markers))
    else:
        raise ValueError(f"unknown plot kind {kind!r}; expected 'contour' or 'polar'")
    if log_callback:
        log_callback(f"[PLOT] {kind} data with {len(markers)} marker(s) written to {path}")
    return path
