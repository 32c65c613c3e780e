import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOGGER_NAME = "paramrls-lab"

PACKAGE_DIR = Path(__file__).parent.resolve()
BUILTIN_SCENARIO_DIR = PACKAGE_DIR / "scenarios"

DEFAULT_PENALTY = 10.0
# Stream id reserved for drawing "random" instance shifts; replicate ids count up from 0.
SHIFT_STREAM_ID = 2**64 - 1

logger = logging.getLogger(LOGGER_NAME)


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    log_level: str = "INFO"
    scenario_dir: Optional[Path] = None


def load_settings() -> Settings:
    """Read lab settings from PARAMRLS_LAB_* environment variables."""
    raw_workers = os.getenv("PARAMRLS_LAB_WORKERS", "1")
    try:
        workers = int(raw_workers)
    except ValueError:
        logger.warning(f"Ignoring non-integer PARAMRLS_LAB_WORKERS={raw_workers!r}; using 1.")
        workers = 1
    if workers < 1:
        logger.warning(f"PARAMRLS_LAB_WORKERS must be >= 1, got {workers}; using 1.")
        workers = 1

    log_level = os.getenv("PARAMRLS_LAB_LOG_LEVEL", "INFO").upper()
    scenario_dir = os.getenv("PARAMRLS_LAB_SCENARIO_DIR")
    return Settings(
        workers=workers,
        log_level=log_level,
        scenario_dir=Path(scenario_dir) if scenario_dir else None,
    )


def configure_logging(level: str = "INFO") -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)
