"""
Service-layer package.
"""

from services.models import OperationResult
from services.analysis_service import AnalysisService, ResolvedInput
from services.group_service import GroupService
from services.sweep_service import SeparatrixService, SweepService

__all__ = [
    "AnalysisService",
    "GroupService",
    "OperationResult",
    "ResolvedInput",
    "SeparatrixService",
    "SweepService",
]
