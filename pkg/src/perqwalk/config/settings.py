from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv


_TRUTHY = {"1", "true", "yes", "on"}


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


# ---- Application-wide settings ---------------------------------------------


@dataclass(frozen=True)
class Settings:
    """
    Process-wide knobs for perqwalk.

    - threads: worker cap for Monte Carlo blocks
    - debug: DEBUG logging (trace blocks become visible)
    - dense_guard: largest Hilbert dimension for dense exact / asymptotic paths
    - general_guard: largest dimension for the general attractor solver
    - mc_block: trajectories per Monte Carlo work unit

    Only data lives here; nothing in this module imports numerics.
    """
    threads: int
    debug: bool = False
    dense_guard: int = 4096
    general_guard: int = 80
    mc_block: int = 1024

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from environment variables (a `.env` file is honoured).

        - PERQWALK_THREADS       : optional (defaults to CPU count)
        - PERQWALK_DEBUG         : optional ("1"/"true" to enable)
        - PERQWALK_DENSE_GUARD   : optional (default 4096)
        - PERQWALK_GENERAL_GUARD : optional (default 80)
        - PERQWALK_MC_BLOCK      : optional (default 1024)
        """
        load_dotenv()

        debug = os.getenv("PERQWALK_DEBUG", "").lower() in _TRUTHY

        return cls(
            threads=_int_env("PERQWALK_THREADS", os.cpu_count() or 1),
            debug=debug,
            dense_guard=_int_env("PERQWALK_DENSE_GUARD", 4096),
            general_guard=_int_env("PERQWALK_GENERAL_GUARD", 80),
            mc_block=_int_env("PERQWALK_MC_BLOCK", 1024),
        )


# ---- Lazy global accessor (DI-friendly) ------------------------------------

# Not built at import time so tests can set the environment first.
_SETTINGS: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Access the global Settings instance, building it from the environment on
    first use.
    """
    global _SETTINGS
    if _SETTINGS is None:
        _SETTINGS = Settings.from_env()
    return _SETTINGS


def override_settings(new_settings: Optional[Settings]) -> None:
    """
    Replace the global settings (tests, embedding). Passing None forces the
    next get_settings() call to re-read the environment.
    """
    global _SETTINGS
    _SETTINGS = new_settings
