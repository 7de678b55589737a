"""
🖨️ Output Formatting
Rendering of exact rationals and float measures for reports and demos
"""

import math
from decimal import Decimal
from fractions import Fraction
from typing import Optional


def format_measure(value: float, decimals: int = 3) -> str:
    """Fixed decimals with trailing zeros stripped, keeping one: 1.0995 -> '1.1', 1.5146 -> '1.515'"""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{decimals}f}"
    if "." in text:
        text = text.rstrip("0")
        if text.endswith("."):
            text += "0"
    if text.lstrip("-") in ("0", "0.0"):
        text = text.lstrip("-")
    return text


def finite_decimal(value: Fraction) -> Optional[str]:
    """Exact decimal text when the denominator only has factors 2 and 5"""
    denominator = value.denominator
    for factor in (2, 5):
        while denominator % factor == 0:
            denominator //= factor
    if denominator != 1:
        return None
    text = format(Decimal(value.numerator) / Decimal(value.denominator), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def format_fraction(value: Fraction, decimal: bool = False) -> str:
    """'7/20' by default; '0.35' with ``decimal`` (falls back to 12 significant digits)"""
    if not decimal:
        return str(value)
    exact = finite_decimal(value)
    if exact is not None:
        return exact
    return f"{float(value):.12g}"


def format_probability(value: Fraction) -> str:
    """'7/20 (0.35)' style used by the demos"""
    approx = finite_decimal(value)
    if approx is None:
        approx = f"{float(value):.6g}"
    if str(value) == approx:
        return approx
    return f"{value} ({approx})"
