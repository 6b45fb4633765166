"""Decimal-string formatting shared by report serialization.

Floats are rendered with 17 significant digits so that parsing the string
back recovers the exact double; infinities use the portable token "inf".
"""

from __future__ import annotations

import math


def fmt17(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def parse17(s: str) -> float:
    return float(s)
