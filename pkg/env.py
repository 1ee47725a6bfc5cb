"""Enlarge toolkit env keys & settings module."""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
env_path = Path(__file__).parent / ".env"
load_dotenv(dotenv_path=env_path)


def get_required_env(env_name: str, default_value: Optional[str] = None) -> str:
    """Validate and return an environmental variable."""
    env_var = os.getenv(env_name)

    if env_var is None:
        if default_value is not None:
            return default_value
        error_message = f"{env_name} environmental variable not found."
        raise RuntimeError(error_message)

    return env_var


def get_float_env(env_name: str, default_value: float) -> float:
    """Return a float setting, failing loudly on garbage."""
    raw = get_required_env(env_name, repr(default_value))
    try:
        return float(raw)
    except ValueError as exc:
        error_message = f"{env_name} must be a number, got {raw!r}."
        raise RuntimeError(error_message) from exc


def get_int_env(env_name: str, default_value: int) -> int:
    """Return an integer setting, failing loudly on garbage."""
    raw = get_required_env(env_name, str(default_value))
    try:
        return int(raw)
    except ValueError as exc:
        error_message = f"{env_name} must be an integer, got {raw!r}."
        raise RuntimeError(error_message) from exc


# Tolerances
EPS_FEAS = get_float_env("ENLARGE_EPS_FEAS", 1e-9)
EPS_EQ = get_float_env("ENLARGE_EPS_EQ", 1e-9)
EPS_RANK = get_float_env("ENLARGE_EPS_RANK", 1e-10)

# Containment and direction nets
VERTEX_BUDGET = get_int_env("ENLARGE_VERTEX_BUDGET", 200_000)
NET_2D = get_int_env("ENLARGE_NET_2D", 720)
NET_ND = get_int_env("ENLARGE_NET_ND", 10_000)
LP_NET_ND = get_int_env("ENLARGE_LP_NET_ND", 2_000)
NET_SEED = get_int_env("ENLARGE_NET_SEED", 20240601)

# Solvers
CONE_MAX_ROUNDS = get_int_env("ENLARGE_CONE_MAX_ROUNDS", 400)
HADAMARD_MAX_DIM = get_int_env("ENLARGE_HADAMARD_MAX_DIM", 16)

# Runtime
CACHE_DIR = get_required_env("ENLARGE_CACHE_DIR", "./cache")
LOG_LEVEL = get_required_env("ENLARGE_LOG_LEVEL", "INFO")
