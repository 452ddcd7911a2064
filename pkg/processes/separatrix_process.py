"""
Separatrix process implementation
Traces fixed-chi sections of the separatrix in parallel and writes the curves and the surface
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from functools import partial
from pathlib import Path

from config.settings import SolverConfig, get_default_config
from core.separatrix import SeparatrixSection, SeparatrixSurface, assemble_surface, surface_count, trace_section
from services.export import versioned, write_csv, write_json
from services.models import LogCallback, ProgressCallback


SECTION_HEADER = ["chi", "rho", "K_s1", "K_s2_inner", "K_s2_outer"]


def section_rows(sections: list[SeparatrixSection], degrees: bool = False) -> list[list]:
    rows = []
    for section in sorted(sections, key=lambda s: s.chi):
        chi = math.degrees(section.chi) if degrees else section.chi
        for sample in section.samples:
            inner, outer = sample.k_s2
            rows.append([chi, sample.rho, sample.k_s1, inner, outer])
    return rows


def run_separatrix(
    chi_grid,
    rho_grid,
    output_dir: str | Path,
    cfg: SolverConfig | None = None,
    *,
    workers: int | None = None,
    degrees: bool = False,
    log_callback: LogCallback | None = None,
    progress_callback: ProgressCallback | None = None,
) -> tuple[SeparatrixSurface, list[Path]]:
    """
    Trace one section per chi and assemble the surface.
    Writes separatrix_sections.csv and separatrix_surface.json under output_dir.
    """
    cfg = cfg or get_default_config()
    workers = max(1, workers or cfg.workers)
    chi_values = [float(c) for c in chi_grid]
    rho_values = [float(r) for r in rho_grid]
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if log_callback:
        log_callback(f"[SEPARATRIX] {len(chi_values)} section(s) x {len(rho_values)} rho value(s), {workers} worker(s)")

    sections: list[SeparatrixSection] = []
    total = max(1, len(chi_values))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(trace_section, chi, rho_values, cfg): chi for chi in chi_values}
        for future in as_completed(futures):
            section = future.result()
            sections.append(section)
            if log_callback:
                missing = sum(1 for s in section.samples if s.k_crit is None)
                cusp = "none" if section.cusp is None else f"rho={section.cusp[0]:.6g} K={section.cusp[1]:.6g}"
                log_callback(f"[SECTION] chi={section.chi:.6g} cusp {cusp}, {missing} sample(s) without crossing")
            if progress_callback:
                progress_callback(int(100 * len(sections) / total))

    surface = assemble_surface(sections, partial(surface_count, cfg=cfg))
    if log_callback:
        log_callback(f"[SURFACE] L1 {len(surface.cusp_line)} point(s), L2 {len(surface.boundary_line)} point(s)")
    csv_path = out / "separatrix_sections.csv"
    json_path = out / "separatrix_surface.json"
    write_csv(csv_path, SECTION_HEADER, section_rows(surface.sections, degrees))
    write_json(json_path, versioned(surface.to_dict()))

    if log_callback:
        log_callback(f"[OK] Wrote {csv_path} and {json_path}")
    return surface, [csv_path, json_path]
