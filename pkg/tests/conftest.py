from __future__ import annotations

import os

import pytest

from src.config import Settings, get_settings
from src.core.sampling import RationalSampler


@pytest.fixture
def settings() -> Settings:
    return Settings(seed=0, resample_budget=8, bruteforce_max_vertices=8, perturb_halvings=64)


@pytest.fixture
def rng() -> RationalSampler:
    return RationalSampler(seed=7, budget=8)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Isolate every test from the developer's environment and the cached settings."""
    for name in [n for n in os.environ if n.startswith("RIGIDKIT_")]:
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
