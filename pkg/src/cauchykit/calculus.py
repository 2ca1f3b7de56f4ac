"""Derivatives, limits and continuity as standard parts of infinitesimal data.

Every probe evaluates the user's expression at a point shifted by an
infinitesimal (the generator ``eps`` unless told otherwise) and rounds the
result with :func:`cauchykit.lc.standard_part`.  The delta-kernel integral and
the series tail probe are ordinary real computations that expose how the
infinitesimal statements behave at small but finite scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import expr as ex
from . import lc
from .expr import Expr
from .lc import LCNumber, TruncationContext
from .quadrature import adaptive_gauss_legendre

__all__ = [
    "NotDifferentiableError",
    "NotDefinedError",
    "ContinuityVerdict",
    "DeltaKernelParams",
    "TailProbeRow",
    "derivative",
    "taylor_coefficients",
    "limit_at",
    "continuity_probe",
    "microcontinuity_probe",
    "commutation_check",
    "delta_kernel_integral",
    "sum_theorem_probe",
]


class NotDifferentiableError(ArithmeticError):
    pass


class NotDefinedError(ArithmeticError):
    """The function cannot be evaluated at the probed point."""


@dataclass(frozen=True)
class ContinuityVerdict:
    point: LCNumber
    increment: LCNumber
    difference: LCNumber
    continuous: bool


@dataclass(frozen=True)
class DeltaKernelParams:
    a: float
    alpha: float
    eps: float
    quadrature_points: int = 10

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if self.quadrature_points < 1:
            raise ValueError("quadrature_points must be positive")


@dataclass(frozen=True)
class TailProbeRow:
    n: int
    n_prime: int
    x: float
    tail_value: float


def _variable(f: Expr, var: str | None) -> str:
    if var is not None:
        return var
    names = ex.variables(f)
    if len(names) > 1:
        raise ValueError(f"expression has several variables {sorted(names)}; pass var=")
    return next(iter(names), "t")


def _eval(f: Expr, var: str, x: LCNumber, ctx: TruncationContext | None) -> LCNumber:
    try:
        return ex.eval_lc(f, {var: x}, ctx)
    except (ArithmeticError, ValueError) as exc:
        raise NotDefinedError(f"{ex.render(f)} is not defined at {lc.render(x)}: {exc}") from exc


def _increment_at(f: Expr, var: str, x0: float, h: LCNumber, ctx) -> LCNumber:
    base = lc.from_real(x0)
    return lc.sub(_eval(f, var, lc.add(base, h, ctx), ctx), _eval(f, var, base, ctx), ctx)


def derivative(f: Expr, x0: float, ctx: TruncationContext | None = None, *, var: str | None = None) -> float:
    """``st((f(x0 + eps) - f(x0)) / eps)``."""
    var = _variable(f, var)
    try:
        diff = _increment_at(f, var, x0, lc.epsilon(), ctx)
    except NotDefinedError as exc:
        raise NotDifferentiableError(str(exc)) from exc
    ratio = lc.scale(diff, 1.0, -1)
    if lc.is_infinite(ratio):
        raise NotDifferentiableError(f"difference quotient of {ex.render(f)} at {x0!r} is infinite")
    return lc.standard_part(ratio)


def taylor_coefficients(f: Expr, x0: float, order: int, ctx: TruncationContext | None = None,
                        *, var: str | None = None) -> list[float]:
    """Coefficients of ``eps^0 .. eps^order`` in ``f(x0 + eps)``."""
    ctx = ctx if ctx is not None else lc.getcontext()
    if order > ctx.exponent_window:
        raise ValueError(f"order {order} exceeds the exponent window {ctx.exponent_window}")
    var = _variable(f, var)
    try:
        value = _eval(f, var, lc.add(lc.from_real(x0), lc.epsilon(), ctx), ctx)
    except NotDefinedError as exc:
        raise NotDifferentiableError(str(exc)) from exc
    for q, _ in value.terms:
        if q > order:
            break
        if q.denominator != 1 or q < 0:
            raise NotDifferentiableError(
                f"{ex.render(f)} has no Taylor expansion at {x0!r} (term eps^{q})")
    return [lc.coefficient(value, j) for j in range(order + 1)]


def limit_at(f: Expr, x0: float, side: str = "above", ctx: TruncationContext | None = None,
             *, var: str | None = None) -> float:
    """``st(f(x0 + eps))`` (``side="above"``) or ``st(f(x0 - eps))``.

    Raises :class:`~cauchykit.lc.InfiniteNumberError` when the value is
    infinite.
    """
    if side not in ("above", "below"):
        raise ValueError(f"side must be 'above' or 'below', got {side!r}")
    var = _variable(f, var)
    h = lc.epsilon() if side == "above" else lc.neg(lc.epsilon())
    return lc.standard_part(_eval(f, var, lc.add(lc.from_real(x0), h, ctx), ctx))


def continuity_probe(f: Expr, x0: float, ctx: TruncationContext | None = None, *,
                     increment: LCNumber | None = None, var: str | None = None) -> ContinuityVerdict:
    """Is ``f(x0 + h) - f(x0)`` infinitesimal for the infinitesimal ``h``?"""
    var = _variable(f, var)
    h = lc.epsilon() if increment is None else increment
    _check_increment(h)
    diff = _increment_at(f, var, x0, h, ctx)
    return ContinuityVerdict(lc.from_real(x0), h, diff, lc.is_infinitesimal(diff))


def _check_increment(h: LCNumber) -> None:
    if lc.is_zero(h) or not lc.is_infinitesimal(h):
        raise ValueError(f"increment must be a nonzero infinitesimal, got {lc.render(h)}")


def microcontinuity_probe(f: Expr, p: LCNumber, increment: LCNumber,
                          ctx: TruncationContext | None = None, *, var: str | None = None) -> ContinuityVerdict:
    """Continuity test at a possibly nonstandard finite point ``p``.

    A failure at an infinitesimal point such as ``p = eps`` shows that ``f``
    is not uniformly continuous on any interval containing ``p``.
    """
    if not lc.is_finite(p):
        raise ValueError(f"point must be finite, got {lc.render(p)}")
    _check_increment(increment)
    var = _variable(f, var)
    diff = lc.sub(_eval(f, var, lc.add(p, increment, ctx), ctx), _eval(f, var, p, ctx), ctx)
    return ContinuityVerdict(p, increment, diff, lc.is_infinitesimal(diff))


def commutation_check(f: Expr, x: LCNumber, ctx: TruncationContext | None = None, *,
                      var: str | None = None, tol: float = 1e-12) -> bool:
    """Does ``st(f(x)) == f(st(x))``?

    Returns False when ``f`` is undefined at ``st(x)`` or ``f(x)`` is
    infinite, since the two sides cannot agree there.
    """
    if not lc.is_finite(x):
        raise ValueError(f"x must be finite, got {lc.render(x)}")
    var = _variable(f, var)
    try:
        rhs = ex.eval_real(f, {var: lc.standard_part(x)})
    except ex.DomainError:
        return False
    value = _eval(f, var, x, ctx)
    if lc.is_infinite(value):
        return False
    return abs(lc.standard_part(value) - rhs) <= tol * max(1.0, abs(rhs))


def delta_kernel_integral(F: Expr, params: DeltaKernelParams, *, var: str | None = None) -> float:
    """``(1/2) * integral over [a-eps, a+eps] of F(m) * alpha / (alpha^2 + (m-a)^2)``.

    With ``alpha`` much smaller than ``eps`` this approaches ``(pi/2) F(a)``;
    for ``F = 1`` it equals ``atan(eps/alpha)`` exactly.
    """
    var = _variable(F, var)
    a, alpha, eps = params.a, params.alpha, params.eps

    def integrand(m: np.ndarray) -> np.ndarray:
        values = np.broadcast_to(ex.eval_array(F, {var: m}), m.shape)
        return 0.5 * values * alpha / (alpha * alpha + (m - a) ** 2)

    # the kernel peaks at a, so a panel edge goes there
    return adaptive_gauss_legendre(integrand, [a - eps, a, a + eps], order=params.quadrature_points)


def sum_theorem_probe(term: Expr, n_ladder: Sequence[int], ratio: int = 2, *,
                      index_var: str = "k", point_var: str = "x") -> list[TailProbeRow]:
    """Tail sums ``sum(term(k, 1/n) for k in range(n, ratio*n))`` along a ladder of n.

    Tails that decay along the ladder are consistent with the series tail
    being infinitesimal at ``x = 1/n``; tails bounded away from zero refute it.
    """
    ladder = [int(n) for n in n_ladder]
    if not ladder or any(n < 1 for n in ladder):
        raise ValueError("n_ladder must contain positive integers")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("n_ladder must be strictly increasing")
    if int(ratio) != ratio or ratio < 2:
        raise ValueError(f"ratio must be an integer >= 2, got {ratio!r}")
    extra = ex.variables(term) - {index_var, point_var}
    if extra:
        raise ValueError(f"term uses unknown variables {sorted(extra)}")
    rows = []
    for n in ladder:
        n_prime = int(ratio) * n
        x = 1.0 / n
        k = np.arange(n, n_prime, dtype=float)
        values = np.broadcast_to(ex.eval_array(term, {index_var: k, point_var: x}), k.shape)
        rows.append(TailProbeRow(n, n_prime, x, math.fsum(values.tolist())))
    return rows
