"""
Service layer for parameter sweeps and separatrix tracing.
"""

from __future__ import annotations

from pathlib import Path

from config.settings import SolverConfig, get_default_config
from core.errors import OctupolarError
from processes import separatrix_process, sweep_process
from services.app_logging import create_operation_logger
from services.models import LogCallback, OperationResult, ProgressCallback


class SweepService:
    def __init__(self, cfg: SolverConfig | None = None, log_dir: Path | None = None):
        self.cfg = cfg or get_default_config()
        self.log_dir = log_dir
        self.process = sweep_process

    def run(
        self,
        k_values,
        rho_values,
        chi_values,
        output_path: str | Path,
        *,
        checkpoint_path: str | Path | None = None,
        workers: int | None = None,
        degrees: bool = False,
        log_callback: LogCallback | None = None,
        progress_callback: ProgressCallback | None = None,
    ) -> OperationResult:
        op_log = create_operation_logger("sweep", self.log_dir, self.cfg.log_level)

        def log(message: str) -> None:
            op_log.info(message)
            if log_callback:
                log_callback(message)

        try:
            points = self.process.build_grid(k_values, rho_values, chi_values)
            if checkpoint_path is None:
                checkpoint_path = Path(f"{output_path}.checkpoint.jsonl")
            rows = self.process.run_sweep(
                points,
                output_path,
                self.cfg,
                checkpoint_path=checkpoint_path,
                workers=workers,
                degrees=degrees,
                log_callback=log,
                progress_callback=progress_callback,
            )
            failed = sum(1 for row in rows if row.count is None)
            message = f"Sweep completed: {len(rows)} point(s), {failed} failed."
            log(message)
            return OperationResult(
                True,
                message,
                output_paths=[str(output_path)],
                details={"rows": rows, "failed": failed, "log_path": str(op_log.log_path)},
            )
        except (OctupolarError, OSError, ValueError) as exc:
            op_log.error(f"sweep failed: {exc}")
            return OperationResult(False, f"Sweep failed: {exc}", details={"log_path": str(op_log.log_path)})
        finally:
            op_log.close()


class SeparatrixService:
    def __init__(self, cfg: SolverConfig | None = None, log_dir: Path | None = None):
        self.cfg = cfg or get_default_config()
        self.log_dir = log_dir
        self.process = separatrix_process

    def run(
        self,
        output_dir: str | Path,
        *,
        chi_values=None,
        rho_values=None,
        workers: int | None = None,
        degrees: bool = False,
        log_callback: LogCallback | None = None,
        progress_callback: ProgressCallback | None = None,
    ) -> OperationResult:
        op_log = create_operation_logger("separatrix", self.log_dir, self.cfg.log_level)

        def log(message: str) -> None:
            op_log.info(message)
            if log_callback:
                log_callback(message)

        chi_values = self.cfg.surface_chi if chi_values is None else chi_values
        rho_values = self.cfg.section_rho if rho_values is None else rho_values
        try:
            surface, paths = self.process.run_separatrix(
                chi_values,
                rho_values,
                output_dir,
                self.cfg,
                workers=workers,
                degrees=degrees,
                log_callback=log,
                progress_callback=progress_callback,
            )
            message = (
                f"Separatrix traced: {len(surface.sections)} section(s), "
                f"{len(surface.cusp_line)} cusp point(s)."
            )
            log(message)
            return OperationResult(
                True,
                message,
                output_paths=[str(p) for p in paths],
                details={"surface": surface, "log_path": str(op_log.log_path)},
            )
        except (OctupolarError, OSError) as exc:
            op_log.error(f"separatrix failed: {exc}")
            return OperationResult(False, f"Separatrix tracing failed: {exc}", details={"log_path": str(op_log.log_path)})
        finally:
            op_log.close()
