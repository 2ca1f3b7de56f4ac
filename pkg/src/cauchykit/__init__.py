"""Infinitesimal calculus over a truncated Levi-Civita field.

A truncated Levi-Civita field (:mod:`cauchykit.lc`) supplies infinitesimals
and the standard part; on top of it sit derivative, limit and continuity
probes (:mod:`cauchykit.calculus`), Crofton length estimates
(:mod:`cauchykit.crofton`) and curvature by infinitely close normals
(:mod:`cauchykit.curvature`).
"""

from .lc import (
    LCNumber,
    TruncationContext,
    epsilon,
    from_real,
    infinitely_close,
    localcontext,
    parse_lc,
    render,
    standard_part,
)
from .expr import ParseError, eval_lc, eval_real, parse
from .curves import Parametric, Polyline, discretize

__version__ = "0.1.0"

__all__ = [
    "LCNumber",
    "TruncationContext",
    "epsilon",
    "from_real",
    "infinitely_close",
    "localcontext",
    "parse_lc",
    "render",
    "standard_part",
    "ParseError",
    "eval_lc",
    "eval_real",
    "parse",
    "Parametric",
    "Polyline",
    "discretize",
]
