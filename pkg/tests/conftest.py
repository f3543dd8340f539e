from __future__ import annotations

import sys
from pathlib import Path

import pytest
import pytest_asyncio


def pytest_configure() -> None:
    """Ensure src/ is importable in tests."""
    repo_root = Path(__file__).resolve().parent.parent
    src = repo_root / "src"
    sys.path.insert(0, str(src))


@pytest.fixture
def cache_env(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point SWEEP_CACHE_DIR at a temporary directory for this test."""
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv("SWEEP_CACHE_DIR", str(cache_dir))
    monkeypatch.setenv("SWEEP_WORKERS", "2")
    return cache_dir


@pytest_asyncio.fixture
async def initialized_cache(cache_env: Path) -> Path:
    """Initialize schema in a fresh temp cache."""
    from database import init_database

    await init_database()
    return cache_env


@pytest.fixture
def fig2_params():
    """Base point of the symmetric regime (Δ = 2ω_m, χ = ζ = 100 s⁻¹, T = 10 μK)."""
    from model.params import SystemParams

    return SystemParams()


@pytest.fixture
def fig2_covariance(fig2_params):
    from lyapunov.solver import solve_lyapunov
    from model.dynamics import linear_model

    model = linear_model(fig2_params)
    return solve_lyapunov(model.drift, model.diffusion)
