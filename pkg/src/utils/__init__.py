"""
Utility modules: bracket-tag console output and small shared helpers.
"""
from utils.helpers import (
    format_rational,
    parse_rational,
    sha256_digest,
    write_text,
)

__all__ = [
    'format_rational',
    'parse_rational',
    'sha256_digest',
    'write_text',
]
