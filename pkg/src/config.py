"""
Configuration module for the private clustering toolkit.
Loads environment variables and provides centralized configuration.
"""
import os
from dotenv import load_dotenv
from pathlib import Path

# Load environment variables
load_dotenv()

ENV_PREFIX = "PRIVCLUSTER_"


def _env(name: str, default: str) -> str:
    return os.getenv(ENV_PREFIX + name, default)


def _env_flag(name: str, default: bool) -> bool:
    return _env(name, "true" if default else "false").lower().strip() in ("1", "true", "yes", "on")


# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
DATA_DIR = PROJECT_ROOT / "data"
INSTANCES_DIR = DATA_DIR / "instances"
REPLAY_DIR = Path(_env("REPLAY_DIR", str(DATA_DIR / "replays")))


class SolverConfig:
    """Limits and switches shared by every solver"""
    # exact solver refuses anything larger (explicit SizeCapError, never truncation)
    EXACT_MAX_POINTS = int(_env("EXACT_MAX_POINTS", "12"))
    EXACT_MAX_LOCATIONS = int(_env("EXACT_MAX_LOCATIONS", "8"))
    EXACT_MAX_K = int(_env("EXACT_MAX_K", "4"))

    # Euclidean front-end rounds distances to multiples of 1/EUCLIDEAN_DENOMINATOR
    EUCLIDEAN_DENOMINATOR = int(_env("EUCLIDEAN_DENOMINATOR", "1000000"))

    # False: stop at the first accepted threshold. True: sweep all, keep the smallest radius
    FULL_TAU_SWEEP = _env_flag("FULL_TAU_SWEEP", False)

    # Structural assertions (radius accounting, cut properties, iteration bounds)
    CHECK_INVARIANTS = _env_flag("CHECK_INVARIANTS", True)


class FacilityConfig:
    """Configuration for the facility-location pipeline"""
    BRUTE_FORCE_MAX_POINTS = int(_env("FL_BRUTE_FORCE_MAX_POINTS", "10"))


class BenchConfig:
    """Configuration for the certification sweeps"""
    DEFAULT_TRIALS = int(_env("BENCH_TRIALS", "200"))
    DEFAULT_SEED = int(_env("BENCH_SEED", "0"))
    DEFAULT_MAX_N = int(_env("BENCH_MAX_N", "10"))
    # wall time breaks byte-identical reports, so it is opt-in
    REPORT_TIMINGS = _env_flag("REPORT_TIMINGS", False)


class LogConfig:
    """Console logging"""
    LOG_LEVEL = _env("LOG_LEVEL", "INFO").upper().strip()
    USE_COLOR = _env_flag("USE_COLOR", True)


def describe() -> str:
    """Human-readable summary of the active configuration"""
    lines = [
        "[OK] Configuration loaded successfully",
        f"  - Project root: {PROJECT_ROOT}",
        f"  - Data directory: {DATA_DIR}",
        f"  - Exact solver caps: |P|<={SolverConfig.EXACT_MAX_POINTS}, "
        f"|L|<={SolverConfig.EXACT_MAX_LOCATIONS}, k<={SolverConfig.EXACT_MAX_K}",
        f"  - Euclidean denominator: {SolverConfig.EUCLIDEAN_DENOMINATOR}",
        f"  - Full tau sweep: {'Enabled' if SolverConfig.FULL_TAU_SWEEP else 'Disabled'}",
        f"  - Invariant checks: {'Enabled' if SolverConfig.CHECK_INVARIANTS else 'Disabled'}",
        f"  - Log level: {LogConfig.LOG_LEVEL}",
    ]
    return "\n".join(lines)
