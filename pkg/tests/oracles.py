"""Independent reference computations used by the tests.

Nothing here touches the LC field; each oracle is plain floating point,
exact rationals, or a closed form.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable


def richardson_derivative(f: Callable[[float], float], x: float, h0: float = 1e-2, levels: int = 4) -> float:
    """Central differences on h0, h0/2, ... extrapolated with a Richardson table."""
    table = []
    for k in range(levels):
        h = h0 / 2**k
        row = [(f(x + h) - f(x - h)) / (2 * h)]
        for j in range(1, k + 1):
            factor = 4.0**j
            row.append((factor * row[j - 1] - table[k - 1][j - 1]) / (factor - 1))
        table.append(row)
    return table[-1][-1]


def binomial_series(power: Fraction, order: int) -> list[Fraction]:
    """Exact coefficients of (1 + x)^power up to x^order."""
    out = [Fraction(1)]
    for k in range(1, order + 1):
        out.append(out[-1] * (power - k + 1) / k)
    return out


def classical_radius(x1: float, y1: float, x2: float, y2: float) -> float:
    """(x'^2 + y'^2)^(3/2) / |x'y'' - y'x''|."""
    return (x1 * x1 + y1 * y1) ** 1.5 / abs(x1 * y2 - y1 * x2)


def inscribed_polygon_length(n: int, radius: float = 1.0) -> float:
    return n * 2.0 * radius * math.sin(math.pi / n)


def midpoint_integral(f: Callable[[float], float], a: float, b: float, n: int = 200000) -> float:
    h = (b - a) / n
    return h * math.fsum(f(a + (k + 0.5) * h) for k in range(n))
