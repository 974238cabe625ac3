# backend/app/config.py
"""
Runtime Configuration

Resource caps and search budgets shared by the exact kernels, the theorem
engine and the verification oracles. Defaults need no environment at all;
``ABVAR_*`` variables (optionally read from a ``.env`` file) and CLI flags
override them.
"""

import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


class Settings(BaseModel):
    """Caps and budgets for every bounded computation"""
    field_cap: int = Field(default=10**5, description="Largest q^n an oracle may enumerate")
    jacobian_cap: int = Field(default=10**5, description="Largest Jacobian an oracle may enumerate")
    index_cap: int = Field(default=10**4, description="Largest [O_K : O_min] for order enumeration")
    trial_division_limit: int = Field(default=10**6)
    factor_budget: int = Field(default=200_000, description="Pollard rho steps per cofactor")
    poly_degree_cap: int = Field(default=16)
    closure_rounds: int = Field(default=64, description="Product rounds before a lattice is declared not a ring")
    generator_search_radius: int = Field(default=3, description="Coefficient bound when searching p-maximal generators")
    jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


_ENV_KEYS = {
    "field_cap": "ABVAR_FIELD_CAP",
    "jacobian_cap": "ABVAR_JACOBIAN_CAP",
    "index_cap": "ABVAR_INDEX_CAP",
    "trial_division_limit": "ABVAR_TRIAL_DIVISION_LIMIT",
    "factor_budget": "ABVAR_FACTOR_BUDGET",
    "poly_degree_cap": "ABVAR_POLY_DEGREE_CAP",
    "closure_rounds": "ABVAR_CLOSURE_ROUNDS",
    "generator_search_radius": "ABVAR_GENERATOR_SEARCH_RADIUS",
    "jobs": "ABVAR_JOBS",
    "log_level": "ABVAR_LOG_LEVEL",
}

_active: Optional[Settings] = None


def settings_from_env() -> Settings:
    """Build settings from ABVAR_* variables, falling back to defaults"""
    values: Dict[str, Any] = {}
    for field_name, env_key in _ENV_KEYS.items():
        raw = os.getenv(env_key)
        if raw is not None and raw != "":
            values[field_name] = raw
    return Settings.model_validate(values)


def get_settings() -> Settings:
    """Settings in force for this process"""
    global _active
    if _active is None:
        _active = settings_from_env()
    return _active


def use_settings(settings: Optional[Settings]) -> None:
    """Install (or with None, reset) the settings for this process"""
    global _active
    _active = settings
