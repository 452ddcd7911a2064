"""
Application logging helpers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from uuid import uuid4

from config.settings import APP_NAME


LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def default_log_dir() -> Path:
    return Path.cwd() / "logs"


@dataclass
class OperationLogger:
    name: str
    operation_id: str
    log_path: Path
    logger: logging.Logger

    def debug(self, message: str) -> None:
        self.logger.debug(message)

    def info(self, message: str) -> None:
        self.logger.info(message)

    def warning(self, message: str) -> None:
        self.logger.warning(message)

    def error(self, message: str) -> None:
        self.logger.error(message)

    def close(self) -> None:
        for handler in list(self.logger.handlers):
            handler.flush()
            handler.close()
            self.logger.removeHandler(handler)


def create_operation_logger(name: str, log_dir: Path | None = None, level: str = "INFO") -> OperationLogger:
    operation_id = datetime.now().strftime("%Y%m%d-%H%M%S") + "-" + uuid4().hex[:8]
    log_root = Path(log_dir) if log_dir else default_log_dir()
    log_root.mkdir(parents=True, exist_ok=True)
    log_path = log_root / f"{name}-{operation_id}.log"

    logger_name = f"{APP_NAME}.{name}.{operation_id}"
    logger = logging.getLogger(logger_name)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    logger.propagate = False
    logger.handlers.clear()

    handler = logging.FileHandler(log_path, encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)

    logger.info("operation started: %s", operation_id)
    return OperationLogger(name=name, operation_id=operation_id, log_path=log_path, logger=logger)


def configure_console_logging(level: str = "INFO") -> logging.Handler:
    """Attach one stderr handler to the root logger; repeated calls only change the level."""
    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    for handler in root.handlers:
        if getattr(handler, "_octupolar_console", False):
            return handler
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._octupolar_console = True
    root.addHandler(handler)
    return handler
