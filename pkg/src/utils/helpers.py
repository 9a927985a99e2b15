"""
Helper utilities shared by the CLI, the bench and the document layer.
"""
import hashlib
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from core.errors import InstanceError

Number = Union[int, Fraction]


def parse_rational(value: Any) -> Fraction:
    """
    Parse an exact nonnegative-or-negative rational from a document value.

    Accepts ints, "3/2", "0.25" and "7". Floats are rejected because they
    would smuggle binary rounding into exact comparisons.
    """
    if isinstance(value, bool):
        raise InstanceError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InstanceError(f"Invalid rational {value!r}: {e}") from e
    raise InstanceError(f"Expected a rational string or integer, got {type(value).__name__}")


def format_rational(value: Number) -> str:
    """Canonical text of a rational: lowest terms, no spaces ("3/2", "5")."""
    return str(Fraction(value))


def sha256_digest(payload: Union[str, bytes]) -> str:
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def write_text(path: Union[str, Path], text: str) -> Path:
    """Write text with a trailing newline, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not text.endswith("\n"):
        text += "\n"
    path.write_text(text, encoding="utf-8")
    return path
