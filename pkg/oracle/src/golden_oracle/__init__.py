"""High-precision generator of golden reference values."""

from .generate import CrossCheckError, generate_entries, write_golden

__all__ = ["generate_entries", "write_golden", "CrossCheckError"]
