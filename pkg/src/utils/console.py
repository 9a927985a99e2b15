"""
Bracket-tagged console output ([OK], [INFO], [WARN], ...).

Everything goes to stderr so that stdout and the files the CLI writes stay
byte-deterministic.
"""
import sys
from colorama import Fore, Style, init as colorama_init

from config import LogConfig

colorama_init()

LEVELS = {"TRACE": 5, "DEBUG": 10, "INFO": 20, "OK": 20, "WARN": 30, "ERROR": 40}

_COLORS = {
    "TRACE": Style.DIM,
    "DEBUG": Fore.CYAN,
    "INFO": Fore.BLUE,
    "OK": Fore.GREEN,
    "WARN": Fore.YELLOW,
    "ERROR": Fore.RED,
}

_threshold = LEVELS.get(LogConfig.LOG_LEVEL, LEVELS["INFO"])


def set_level(level: str) -> None:
    """Change the minimum tag level that is printed."""
    global _threshold
    if level.upper() not in LEVELS:
        raise ValueError(f"Unknown log level: {level}")
    _threshold = LEVELS[level.upper()]


def enabled(tag: str) -> bool:
    return LEVELS[tag] >= _threshold


def emit(tag: str, message: str) -> None:
    if not enabled(tag):
        return
    label = f"[{tag}]"
    if LogConfig.USE_COLOR:
        label = f"{_COLORS[tag]}{label}{Style.RESET_ALL}"
    print(f"{label} {message}", file=sys.stderr)


def trace(message: str) -> None:
    emit("TRACE", message)


def debug(message: str) -> None:
    emit("DEBUG", message)


def info(message: str) -> None:
    emit("INFO", message)


def ok(message: str) -> None:
    emit("OK", message)


def warn(message: str) -> None:
    emit("WARN", message)


def error(message: str) -> None:
    emit("ERROR", message)


def banner(title: str, width: int = 80) -> None:
    """Section header in the style of the evaluation scripts."""
    if not enabled("INFO"):
        return
    print("=" * width, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * width, file=sys.stderr)
