import sys
from pathlib import Path

import pytest


ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from config.settings import SolverConfig  # noqa: E402


@pytest.fixture
def cfg():
    return SolverConfig()


@pytest.fixture
def trace_cfg():
    """Coarser search grid for tests that solve many parameter points."""
    return SolverConfig(seed_grid=(32, 64), trace_seed_grid=(12, 24), bracket_width=1e-5)


@pytest.fixture
def log_dir(tmp_path):
    path = tmp_path / "logs"
    path.mkdir()
    return path
