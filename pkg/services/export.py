"""
Result writers: CSV and JSON files, text tables and diffs.
"""

from __future__ import annotations

import csv
import difflib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

from config.version import REPORT_SCHEMA_VERSION, __version__


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _atomic_write(path: Path, text: str, newline: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = None
    try:
        with tempfile.NamedTemporaryFile(
            "w",
            encoding="utf-8",
            dir=path.parent,
            prefix=f".{path.name}.",
            suffix=".tmp",
            delete=False,
            newline=newline,
        ) as temp_file:
            temp_file.write(text)
            temp_path = temp_file.name
        os.replace(temp_path, path)
        temp_path = None
    finally:
        if temp_path and os.path.exists(temp_path):
            os.unlink(temp_path)
    return path


def csv_text(header: list[str], rows: Iterable[Iterable[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_csv(path: str | Path, header: list[str], rows: Iterable[Iterable[Any]]) -> Path:
    return _atomic_write(Path(path), csv_text(header, rows), newline="")


def json_text(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, payload: Any) -> Path:
    return _atomic_write(Path(path), json_text(payload))


def versioned(payload: dict[str, Any]) -> dict[str, Any]:
    return {"schema_version": REPORT_SCHEMA_VERSION, "generator": f"octupolar {__version__}", **payload}


def _angle(value: float, degrees: bool) -> float:
    return math.degrees(value) if degrees else value


def render_report_table(report, degrees: bool = False) -> str:
    """Critical points one per row, in the report's deterministic order."""
    unit = "deg" if degrees else "rad"
    lines = [
        f"{'n':>3}  {'theta1/' + unit:>14}  {'theta2/' + unit:>14}  {'lambda':>14}  "
        f"{'eig1':>12}  {'eig2':>12}  {'type':<18} {'index':>5}"
    ]
    for n, cp in enumerate(report.points, start=1):
        lines.append(
            f"{n:>3}  {_angle(cp.location.theta1, degrees):>14.9f}  {_angle(cp.location.theta2, degrees):>14.9f}  "
            f"{cp.value:>14.10f}  {cp.hessian_eigs[0]:>12.6f}  {cp.hessian_eigs[1]:>12.6f}  "
            f"{cp.morse_type.value:<18} {cp.index:>5}"
        )
    for circle in report.circles:
        lines.append(
            f"  o  {_angle(circle.theta1, degrees):>14.9f}  {'(circle)':>14}  {circle.value:>14.10f}  "
            f"{0.0:>12.6f}  {circle.hessian_eig:>12.6f}  {'CircleDegenerate':<18} {'':>5}"
        )
    return "\n".join(lines)


def build_unified_diff(
    before: str,
    after: str,
    *,
    fromfile: str = "before",
    tofile: str = "after",
) -> str:
    before_lines = before.splitlines(keepends=True)
    after_lines = after.splitlines(keepends=True)
    return "".join(
        difflib.unified_diff(
            before_lines,
            after_lines,
            fromfile=fromfile,
            tofile=tofile,
            lineterm="\n",
        )
    )
