"""
⚙️ Engine Configuration
Centralized configuration for enumeration caps, rendering and logging
"""

import logging
import os
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Load environment variables
ROOT_DIR = Path(__file__).parent.parent
load_dotenv(ROOT_DIR / '.env')


def _env_bool(name: str, default: str = 'False') -> bool:
    return os.environ.get(name, default).lower() == 'true'


def _env_grid(name: str, default: str) -> Tuple[int, ...]:
    raw = os.environ.get(name, default)
    return tuple(int(part) for part in raw.split(',') if part.strip())


class EngineConfig:
    """Caps on exhaustive operations and defaults for the belief-change engine"""
    # 2^16 worlds is the largest space we enumerate densely
    MAX_LETTERS: int = int(os.environ.get('ENGINE_MAX_LETTERS', '16'))
    # n! * 2^n substitutions
    S_ENTAILMENT_CAP: int = int(os.environ.get('ENGINE_S_ENTAILMENT_CAP', '8'))
    # possible remainders range over subsets of the support
    REMAINDER_ENUMERATION_CAP: int = int(os.environ.get('ENGINE_REMAINDER_CAP', '4'))
    # the severe-withdrawal definition quantifies over all 2^(2^n) formulas
    SEVERE_DEFINITION_CAP: int = int(os.environ.get('ENGINE_SEVERE_DEFINITION_CAP', '3'))
    FUZZ_MAX_LETTERS: int = int(os.environ.get('ENGINE_FUZZ_MAX_LETTERS', '4'))
    DEFAULT_BASE: float = float(os.environ.get('ENGINE_DEFAULT_BASE', '2'))

    # Fuzzing
    MASS_GRID: Tuple[int, ...] = _env_grid('ENGINE_MASS_GRID', '0,1,2,3,4')
    DEFAULT_FUZZ_SEED: int = int(os.environ.get('ENGINE_FUZZ_SEED', '0'))
    DEFAULT_FUZZ_CASES: int = int(os.environ.get('ENGINE_FUZZ_CASES', '200'))
    SHRINK_ROUNDS: int = int(os.environ.get('ENGINE_SHRINK_ROUNDS', '50'))

    # Tolerance for float measures (definitional vs closed form)
    MEASURE_TOLERANCE: float = float(os.environ.get('ENGINE_MEASURE_TOLERANCE', '1e-9'))


class RenderConfig:
    """Output rendering settings"""
    MEASURE_DECIMALS: int = int(os.environ.get('ENGINE_MEASURE_DECIMALS', '3'))
    MAX_MEASURE_DECIMALS: int = 6
    DECIMAL_RATIONALS: bool = _env_bool('ENGINE_DECIMAL_RATIONALS')


class LoggingConfig:
    """Logging configuration"""
    LEVEL: str = os.environ.get('ENGINE_LOG_LEVEL', 'WARNING')
    FORMAT: str = os.environ.get('ENGINE_LOG_FORMAT', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    JSON: bool = _env_bool('ENGINE_LOG_JSON')
    FILE_PATH: Optional[str] = os.environ.get('ENGINE_LOG_FILE_PATH')


class AppConfig:
    """Main application configuration"""
    TITLE: str = "KM Belief Change Engine"
    DESCRIPTION: str = "Knowledge-measure based contraction, revision and severe withdrawal over exact distributions"
    VERSION: str = "1.0.0"


# Global configuration instances
engine_config = EngineConfig()
render_config = RenderConfig()
logging_config = LoggingConfig()
app_config = AppConfig()


def validate_config() -> bool:
    """Validate configuration ranges; logs every problem and returns False if any"""
    problems: List[str] = []

    if not 1 <= engine_config.MAX_LETTERS <= 16:
        problems.append(f"ENGINE_MAX_LETTERS must be within 1..16 (got {engine_config.MAX_LETTERS})")

    for name in ('S_ENTAILMENT_CAP', 'REMAINDER_ENUMERATION_CAP', 'SEVERE_DEFINITION_CAP', 'FUZZ_MAX_LETTERS'):
        value = getattr(engine_config, name)
        if not 1 <= value <= engine_config.MAX_LETTERS:
            problems.append(f"{name} must be within 1..{engine_config.MAX_LETTERS} (got {value})")

    if engine_config.DEFAULT_BASE <= 1:
        problems.append(f"ENGINE_DEFAULT_BASE must be > 1 (got {engine_config.DEFAULT_BASE})")

    if not engine_config.MASS_GRID or any(weight < 0 for weight in engine_config.MASS_GRID):
        problems.append("ENGINE_MASS_GRID must list nonnegative integer weights")
    elif max(engine_config.MASS_GRID) == 0:
        problems.append("ENGINE_MASS_GRID needs at least one positive weight")

    if not 0 <= render_config.MEASURE_DECIMALS <= render_config.MAX_MEASURE_DECIMALS:
        problems.append(
            f"ENGINE_MEASURE_DECIMALS must be within 0..{render_config.MAX_MEASURE_DECIMALS} "
            f"(got {render_config.MEASURE_DECIMALS})"
        )

    if not isinstance(logging.getLevelName(logging_config.LEVEL.upper()), int):
        problems.append(f"ENGINE_LOG_LEVEL is not a logging level (got {logging_config.LEVEL})")

    for problem in problems:
        logger.warning(f"⚠️ Configuration: {problem}")

    if not problems:
        logger.debug("✅ Configuration validation passed")

    return not problems
