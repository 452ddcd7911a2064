"""
Service layer for single-tensor analysis: spectrum, phase, oracle and plot data.
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.errors import OctupolarError
from core.orientation import OrientationResult, OrientedParams, orient, params_tensor
from core.solver import SpectrumReport, oracle_spectrum, solve_spectrum
from core.symmetry import SymmetryReport, detect_symmetry
from core.tensor import OctupolarTensor
from processes import plotdata_process
from services.export import render_report_table, versioned, write_json
from services.models import LogCallback, OperationResult


COMPONENT_NAMES = ("alpha0", "alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3")
ZERO_NORM = 1e-14


def load_tensor_file(path: str | Path) -> OctupolarTensor:
    """
    Read a tensor from JSON.
    Accepted forms: {"components": [7 numbers]}, {"components": {"alpha0": ...}} or {"array": 3x3x3}.
    """
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: expected a JSON object")
    if "components" in payload:
        components = payload["components"]
        if isinstance(components, dict):
            unknown = set(components) - set(COMPONENT_NAMES)
            if unknown:
                raise ValueError(f"{path}: unknown component(s) {sorted(unknown)}")
            return OctupolarTensor(**{k: float(v) for k, v in components.items()})
        return OctupolarTensor.from_vector(components)
    if "array" in payload:
        a = np.asarray(payload["array"], dtype=float)
        if a.shape != (3, 3, 3):
            raise ValueError(f"{path}: array must be 3x3x3, got shape {a.shape}")
        scale = max(1.0, float(np.abs(a).max()))
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
            if np.abs(a - a.transpose(perm)).max() > 1e-9 * scale:
                raise ValueError(f"{path}: array is not fully symmetric")
        if np.abs(np.einsum("iik->k", a)).max() > 1e-9 * scale:
            raise ValueError(f"{path}: array is not traceless")
        return OctupolarTensor.from_array(a)
    raise ValueError(f"{path}: expected a 'components' or 'array' entry")


@dataclass
class ResolvedInput:
    """Oriented parameters of the tensor to analyze, with the orientation when one was needed."""

    params: OrientedParams | None
    source: str
    tensor: OctupolarTensor
    orientation: OrientationResult | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"source": self.source}
        if self.orientation is not None:
            data["rotation"] = self.orientation.rotation.tolist()
            data["scale"] = self.orientation.scale
            data["orienting_max_is_absolute"] = self.orientation.absolute_max
        return data


class AnalysisService:
    def __init__(
        self,
        cfg: SolverConfig | None = None,
        *,
        solve_fn: Callable[..., SpectrumReport] = solve_spectrum,
        symmetry_fn: Callable[..., SymmetryReport] = detect_symmetry,
        orient_fn: Callable[..., OrientationResult] = orient,
        oracle_fn: Callable[..., SpectrumReport] = oracle_spectrum,
    ):
        self.cfg = cfg or get_default_config()
        self.solve = solve_fn
        self.symmetry = symmetry_fn
        self.orient = orient_fn
        self.oracle_solve = oracle_fn
        self.process = plotdata_process

    def resolve_params(
        self,
        *,
        cylinder: tuple[float, float, float] | None = None,
        raw: list[float] | None = None,
        tensor_file: str | Path | None = None,
        degrees: bool = False,
        allow_zero: bool = False,
    ) -> ResolvedInput:
        given = [x is not None for x in (cylinder, raw, tensor_file)]
        if sum(given) != 1:
            raise ValueError("exactly one of cylinder, raw or tensor_file must be given")
        if cylinder is not None:
            k, rho, chi = cylinder
            params = OrientedParams(k, rho, math.radians(chi) if degrees else chi)
            return ResolvedInput(params, "cylinder", params_tensor(params))
        if raw is not None:
            tensor, source = OctupolarTensor.from_vector(raw), "raw"
        else:
            tensor, source = load_tensor_file(tensor_file), "tensor-file"
        if allow_zero and tensor.norm() < ZERO_NORM:
            return ResolvedInput(None, source, tensor)
        result = self.orient(tensor, self.cfg)
        return ResolvedInput(result.params, source, tensor, result)

    def analyze(
        self,
        request: ResolvedInput,
        *,
        json_path: str | Path | None = None,
        degrees: bool = False,
        log_callback: LogCallback | None = None,
    ) -> OperationResult:
        try:
            report = self.solve(request.params, self.cfg)
            table = render_report_table(report, degrees)
            output_paths = []
            if json_path:
                payload = versioned({"input": request.to_dict(), "report": report.to_dict()})
                output_paths.append(str(write_json(json_path, payload)))
                if log_callback:
                    log_callback(f"[OK] Report written to {json_path}")
            p = report.params
            message = (
                f"K={p.k:.10g} rho={p.rho:.10g} chi={p.chi:.10g}: {report.count} critical point(s), "
                f"{len(report.circles)} circle(s), stratum {report.stratum.name}, phase {report.phase}"
            )
            return OperationResult(
                True, message, output_paths=output_paths, details={"report": report, "table": table}
            )
        except (OctupolarError, OSError) as exc:
            return OperationResult(False, f"Analysis failed: {exc}")

    def phase(self, request: ResolvedInput) -> OperationResult:
        try:
            report = self.solve(request.params, self.cfg)
            symmetry = self.symmetry(request.params, self.cfg)
        except OctupolarError as exc:
            return OperationResult(False, f"Phase classification failed: {exc}")
        line = (
            f"{symmetry.group_name}, {report.stratum.name}, phase {report.phase}, "
            f"{report.n_max} maxima, variant {report.variant}, "
            f"absolute max at pole {str(report.absolute_max_at_pole).lower()}"
        )
        return OperationResult(True, line, details={"report": report, "symmetry": symmetry})

    def oracle(
        self,
        request: ResolvedInput,
        *,
        n_lat: int = 256,
        n_lon: int = 512,
        json_path: str | Path | None = None,
        degrees: bool = False,
    ) -> OperationResult:
        try:
            report = self.oracle_solve(request.params, n_lat, n_lon, self.cfg)
            output_paths = []
            if json_path:
                payload = versioned({"input": request.to_dict(), "oracle": {"n_lat": n_lat, "n_lon": n_lon},
                                     "report": report.to_dict()})
                output_paths.append(str(write_json(json_path, payload)))
        except (OctupolarError, OSError) as exc:
            return OperationResult(False, f"Oracle failed: {exc}")
        message = f"Oracle on a {n_lat}x{n_lon} grid: {report.count} critical point(s), phase {report.phase}"
        return OperationResult(
            True,
            message,
            output_paths=output_paths,
            details={"report": report, "table": render_report_table(report, degrees)},
        )

    def plotdata(
        self,
        request: ResolvedInput,
        kind: str,
        resolution: int,
        output_path: str | Path,
        *,
        degrees: bool = False,
        log_callback: LogCallback | None = None,
    ) -> OperationResult:
        try:
            markers = []
            if request.params is not None:
                report = self.solve(request.params, self.cfg)
                orientation = request.orientation
                if orientation is None:
                    markers = self.process.report_markers(report)
                else:
                    markers = self.process.report_markers(report, orientation.rotation, orientation.scale)
            path = self.process.write_plotdata(
                request.tensor, kind, resolution, output_path, markers, degrees=degrees, log_callback=log_callback
            )
        except (OctupolarError, OSError, ValueError) as exc:
            return OperationResult(False, f"Plot data export failed: {exc}")
        return OperationResult(
            True,
            f"{kind} data written to {path} ({len(markers)} marker(s))",
            output_paths=[str(path)],
            details={"markers": len(markers)},
        )
