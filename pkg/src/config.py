"""
Environment-backed settings.
Values are read once per process; call get_settings.cache_clear() after changing the environment.
"""
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from src.exceptions import ConfigurationException

load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationException(f"{name} must be an integer, got {raw!r}", setting=name)
    if value < minimum:
        raise ConfigurationException(f"{name} must be at least {minimum}", setting=name)
    return value


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    resample_budget: int = 8
    bruteforce_max_vertices: int = 10
    perturb_halvings: int = 64
    memory_limit_percent: int = 90
    api_key: Optional[str] = None
    frontend_url: str = "http://localhost:3000"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        seed=_int_setting("RIGIDKIT_SEED", 0),
        resample_budget=_int_setting("RIGIDKIT_RESAMPLE_BUDGET", 8, minimum=1),
        bruteforce_max_vertices=_int_setting("RIGIDKIT_BRUTEFORCE_MAX_VERTICES", 10, minimum=1),
        perturb_halvings=_int_setting("RIGIDKIT_PERTURB_HALVINGS", 64, minimum=1),
        memory_limit_percent=_int_setting("RIGIDKIT_MEMORY_LIMIT_PERCENT", 90, minimum=1),
        api_key=os.getenv("RIGIDKIT_API_KEY"),
        frontend_url=os.getenv("PUBLIC_FRONTEND_URL", "http://localhost:3000"),
    )
