"""
Shared service-layer models.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any


LogCallback = Callable[[str], None]
ProgressCallback = Callable[[int], None]


@dataclass
class OperationResult:
    success: bool
    message: str
    output_paths: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
