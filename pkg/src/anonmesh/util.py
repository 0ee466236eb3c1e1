"""Small shared helpers."""

from __future__ import annotations


def round_sig(x: float, digits: int = 6) -> float:
    """Round to ``digits`` significant digits (stable numeric output files)."""
    return float(f"{x:.{digits}g}")


def fmt_sig(x: float, digits: int = 6) -> str:
    """Format with ``digits`` significant digits."""
    return f"{x:.{digits}g}"
