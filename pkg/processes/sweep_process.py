"""
Sweep process implementation
Evaluates the spectrum on a parameter grid with checkpointing and ordered output
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from pathlib import Path

from config.settings import SolverConfig, get_default_config
from core.errors import OctupolarError
from core.orientation import OrientedParams
from core.solver import solve_spectrum
from services.export import write_csv
from services.models import LogCallback, ProgressCallback


logger = logging.getLogger(__name__)

SWEEP_HEADER = ["K", "rho", "chi", "count", "n_max", "phase"]


@dataclass
class SweepRow:
    k: float
    rho: float
    chi: float
    count: int | None
    n_max: int | None
    phase: str

    def values(self, degrees: bool = False) -> list:
        chi = math.degrees(self.chi) if degrees else self.chi
        return [self.k, self.rho, chi, self.count, self.n_max, self.phase]


def build_grid(k_values, rho_values, chi_values) -> list[OrientedParams]:
    """Grid points in K-major, then rho, then chi order."""
    return [
        OrientedParams(float(k), float(rho), float(chi))
        for k, rho, chi in itertools.product(k_values, rho_values, chi_values)
    ]


def evaluate_point(p: OrientedParams, cfg: SolverConfig) -> SweepRow:
    try:
        report = solve_spectrum(p, cfg)
    except OctupolarError as exc:
        logger.warning("K=%.6g rho=%.6g chi=%.6g failed: %s", p.k, p.rho, p.chi, exc)
        return SweepRow(p.k, p.rho, p.chi, None, None, type(exc).__name__)
    phase = report.phase
    if phase.startswith("B"):
        phase += report.variant
    return SweepRow(p.k, p.rho, p.chi, report.count, report.n_max, phase)


def load_checkpoint(path: Path | None) -> dict[int, SweepRow]:
    if path is None or not path.exists():
        return {}
    done: dict[int, SweepRow] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
        except json.JSONDecodeError:
            # A torn final line from an interrupted run.
            continue
        done[int(entry["index"])] = SweepRow(**entry["row"])
    return done


def matches_point(row: SweepRow, p: OrientedParams, tol: float = 1e-12) -> bool:
    """True when a checkpoint row was computed for the grid point p."""
    return all(
        math.isclose(a, b, rel_tol=0.0, abs_tol=tol) for a, b in zip((row.k, row.rho, row.chi), p.as_tuple())
    )


def run_sweep(
    points: list[OrientedParams],
    output_path: str | Path,
    cfg: SolverConfig | None = None,
    *,
    checkpoint_path: str | Path | None = None,
    workers: int | None = None,
    degrees: bool = False,
    log_callback: LogCallback | None = None,
    progress_callback: ProgressCallback | None = None,
) -> list[SweepRow]:
    cfg = cfg or get_default_config()
    workers = max(1, workers or cfg.workers)
    checkpoint = Path(checkpoint_path) if checkpoint_path else None

    def log(msg):
        if log_callback:
            log_callback(msg)

    restored = load_checkpoint(checkpoint)
    done = {i: row for i, row in restored.items() if i < len(points) and matches_point(row, points[i])}
    if len(done) < len(restored):
        logger.warning("discarded %d checkpoint row(s) from a different grid", len(restored) - len(done))
        log(f"[WARN] {len(restored) - len(done)} checkpoint row(s) do not match this grid and will be recomputed")
    pending = [i for i in range(len(points)) if i not in done]
    log(f"[SWEEP] {len(points)} grid points, {len(done)} restored from checkpoint, {workers} worker(s)")

    total = max(1, len(points))
    if progress_callback:
        progress_callback(int(100 * len(done) / total))

    handle = checkpoint.open("a", encoding="utf-8") if checkpoint else None
    if handle and checkpoint.stat().st_size and not checkpoint.read_bytes().endswith(b"\n"):
        handle.write("\n")
    try:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(evaluate_point, points[i], cfg): i for i in pending}
            for future in as_completed(futures):
                index = futures[future]
                row = future.result()
                done[index] = row
                if handle:
                    handle.write(json.dumps({"index": index, "row": asdict(row)}, sort_keys=True) + "\n")
                    handle.flush()
                if row.count is None:
                    log(f"[ERROR] K={row.k:.6g} rho={row.rho:.6g} chi={row.chi:.6g}: {row.phase}")
                if progress_callback:
                    progress_callback(int(100 * len(done) / total))
    finally:
        if handle:
            handle.close()

    rows = [done[i] for i in range(len(points))]
    write_csv(output_path, SWEEP_HEADER, (row.values(degrees) for row in rows))
    if checkpoint and checkpoint.exists():
        checkpoint.unlink()
    log(f"[OK] Wrote {len(rows)} rows to {output_path}")
    return rows
