"""Shared formatting and file-writing helpers.

Reports carry exact ratios as numerator/denominator pairs plus a fixed
four-place decimal rendering, rounded half-even so the text form of any
ratio is reproducible byte for byte.
"""

from __future__ import annotations

import os
import tempfile
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path

DISPLAY_PLACES = 4


def format_fraction(value: Fraction, places: int = DISPLAY_PLACES) -> str:
    quantum = Decimal(1).scaleb(-places)
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    return str(exact.quantize(quantum, rounding=ROUND_HALF_EVEN))


def format_float(value: float, places: int = DISPLAY_PLACES) -> str:
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))


def fraction_payload(value: Fraction) -> dict:
    """JSON shape for an exact ratio: numerator, denominator, and the
    canonical decimal rendering."""
    return {
        "num": value.numerator,
        "den": value.denominator,
        "decimal": format_fraction(value),
    }


def ratio_one_decimal(value: Fraction) -> str:
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    return str(exact.quantize(Decimal("0.1"), rounding=ROUND_HALF_EVEN))


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never observe
    a partially written file."""
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
