#!/usr/bin/env python3
"""
Settings module for the game enumeration tools.
Holds configuration constants, environment lookups and logging setup.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Optional

import coloredlogs


JOBS_ENV = "WVG_JOBS"
DUMP_ENV = "WVG_DUMP_LPS"
LOG_LEVEL_ENV = "WVG_LOG_LEVEL"

LOG_FORMAT = "%(asctime)s %(name)s[%(process)d] %(levelname)s %(message)s"


def env_flag(name: str) -> bool:
    """Read a boolean switch from the environment."""
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def env_int(name: str, default: int) -> int:
    """Read a positive integer from the environment, falling back to default."""
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logging.getLogger(__name__).warning("Ignoring %s=%r: not an integer", name, raw)
        return default
    return value if value > 0 else default


@dataclass
class SolverConfig:
    """Simplex engine constants."""
    BLAND_THRESHOLD: int = 50
    PIVOT_LIMIT: int = 20000
    VERIFY: bool = False
    DUMP_LPS: bool = field(default_factory=lambda: env_flag(DUMP_ENV))


@dataclass
class SearchConfig:
    """Enumeration and worker pool constants."""
    SPLIT_DEPTH: int = 2
    DEFAULT_JOBS: int = field(default_factory=lambda: env_int(JOBS_ENV, 1))
    PROGRESS: bool = True


@dataclass
class MinRepConfig:
    """Minimum-sum search constants."""
    MAX_ROUNDS: int = 100
    NODE_LIMIT: int = 100000
    # bound sweeps per search node when bounds are passed down the tree
    INHERIT_ROUNDS: int = 1


@dataclass
class TableConfig:
    """Coalition lattice constants."""
    MAX_VOTERS: int = 16
    TABLE_MAX_VOTERS: int = 12


def setup_logging(verbose: bool = False, quiet: bool = False, level: Optional[str] = None) -> None:
    """Install colored console logging for the command line tools."""
    if level is None:
        level = os.environ.get(LOG_LEVEL_ENV)
    if level is None:
        level = "DEBUG" if verbose else ("WARNING" if quiet else "INFO")
    coloredlogs.install(level=level.upper(), fmt=LOG_FORMAT)
