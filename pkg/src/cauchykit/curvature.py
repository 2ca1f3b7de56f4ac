"""Radius and center of curvature from infinitely close data.

Three constructions, all carried out on the Taylor jet ``P(t + eps)`` of a
parametric curve and rounded with the standard part:

* contingence angle: ``1/rho = st(dtau / sqrt(dx^2 + dy^2))``;
* chord deviation: equal infinitesimal lengths ``i`` along the curve and the
  tangent end ``gamma`` apart, and ``rho = st(i^2 / (2 gamma))``;
* normal intersection: the normals at ``t`` and ``t + eps`` meet at a point
  whose standard part is the center of curvature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import expr as ex
from . import lc
from .curves import Parametric
from .lc import LCNumber, TruncationContext

__all__ = [
    "CurvatureMethod",
    "CurvatureErrorKind",
    "CurvatureError",
    "CurvaturePoint",
    "CSV_COLUMNS",
    "MIN_WINDOW",
    "tangent_angle",
    "radius_contingence",
    "radius_chord",
    "center_normals",
    "osculating",
]

MIN_WINDOW = 4
# Below this angle between velocity and acceleration the curve is treated as
# locally straight; rounding noise in the jets lives far below it.
_STRAIGHT_TOL = 1e-13
_AGREEMENT_TOL = 1e-8


class CurvatureMethod(str, enum.Enum):
    CONTINGENCE_ANGLE = "ContingenceAngle"
    CHORD_DEVIATION = "ChordDeviation"
    NORMAL_INTERSECTION = "NormalIntersection"


class CurvatureErrorKind(str, enum.Enum):
    INFINITE_RADIUS = "InfiniteRadius"
    EVALUATION_FAILURE = "EvaluationFailure"
    DEGENERATE_PARAMETRIZATION = "DegenerateParametrization"


class CurvatureError(ArithmeticError):
    def __init__(self, kind: CurvatureErrorKind, detail: str):
        self.kind = CurvatureErrorKind(kind)
        self.detail = detail
        super().__init__(f"{self.kind.value}: {detail}")


@dataclass(frozen=True)
class CurvaturePoint:
    t: float
    position: tuple[float, float]
    tau: float
    rho: float
    center: tuple[float, float]
    method: CurvatureMethod = CurvatureMethod.CHORD_DEVIATION

    def as_row(self) -> tuple:
        return (self.t, *self.position, self.tau, self.rho, *self.center, self.method.value)


CSV_COLUMNS = ("t", "x", "y", "tau", "rho", "cx", "cy", "method")


@dataclass(frozen=True)
class _Jet:
    position: tuple[float, float]
    velocity: tuple[float, float]
    accel: tuple[float, float]
    dx: LCNumber  # x(t+eps) - x(t)
    dy: LCNumber
    vx: LCNumber  # x'(t+eps)
    vy: LCNumber
    ctx: TruncationContext

    @property
    def speed(self) -> float:
        return math.hypot(*self.velocity)


def _drop_below(a: LCNumber, order: int) -> LCNumber:
    return lc.LCNumber(tuple((q, c) for q, c in a.terms if q >= order))


def _jet(curve: Parametric, t: float, ctx: TruncationContext | None) -> _Jet:
    ctx = ctx if ctx is not None else lc.getcontext()
    if ctx.exponent_window < MIN_WINDOW:
        raise ValueError(f"curvature needs an exponent window >= {MIN_WINDOW}, got {ctx.exponent_window}")
    arg = lc.add(lc.from_real(t), lc.epsilon(), ctx)
    try:
        X = ex.eval_lc(curve.x, {curve.var: arg}, ctx)
        Y = ex.eval_lc(curve.y, {curve.var: arg}, ctx)
    except (ArithmeticError, ValueError) as exc:
        raise CurvatureError(CurvatureErrorKind.EVALUATION_FAILURE, f"at t={t!r}: {exc}") from exc
    for name, S in (("x", X), ("y", Y)):
        for q, _ in S.terms:
            if q.denominator != 1 or q < 0:
                raise CurvatureError(CurvatureErrorKind.DEGENERATE_PARAMETRIZATION,
                                     f"{name}(t) is not analytic at t={t!r} (term eps^{q})")
    vx, vy = lc.d_deps(X), lc.d_deps(Y)
    velocity = (lc.coefficient(vx, 0), lc.coefficient(vy, 0))
    if velocity == (0.0, 0.0):
        raise CurvatureError(CurvatureErrorKind.DEGENERATE_PARAMETRIZATION, f"velocity vanishes at t={t!r}")
    return _Jet(
        position=(lc.coefficient(X, 0), lc.coefficient(Y, 0)),
        velocity=velocity,
        accel=(2.0 * lc.coefficient(X, 2), 2.0 * lc.coefficient(Y, 2)),
        dx=_drop_below(X, 1),
        dy=_drop_below(Y, 1),
        vx=vx,
        vy=vy,
        ctx=ctx,
    )


def _straight(jet: _Jet, normal_part: float) -> bool:
    """Is the normal acceleration component negligible?"""
    return abs(normal_part) <= _STRAIGHT_TOL * math.hypot(*jet.accel)


def _infinite(t: float, why: str) -> CurvatureError:
    return CurvatureError(CurvatureErrorKind.INFINITE_RADIUS, f"at t={t!r}: {why}")


def tangent_angle(curve: Parametric, t: float, ctx: TruncationContext | None = None) -> float:
    """Counterclockwise angle from the x-axis to the velocity, ``atan2(y', x')``."""
    jet = _jet(curve, t, ctx)
    return math.atan2(jet.velocity[1], jet.velocity[0])


def _cross_with_v0(jet: _Jet) -> LCNumber:
    # v0 x v(t+eps); its constant term cancels exactly because v0 is taken
    # from the same jet
    v0x, v0y = jet.velocity
    return lc.sub(lc.scale(jet.vy, v0x), lc.scale(jet.vx, v0y), jet.ctx)


def _signed_curvature(curve: Parametric, t: float, jet: _Jet) -> float:
    ctx = jet.ctx
    cross = _cross_with_v0(jet)
    v0x, v0y = jet.velocity
    dot = lc.add(lc.scale(jet.vx, v0x), lc.scale(jet.vy, v0y), ctx)
    dtau = lc.lift_analytic("atan", lc.div(cross, dot, ctx), ctx)
    ds = lc.lc_sqrt(lc.add(lc.mul(jet.dx, jet.dx, ctx), lc.mul(jet.dy, jet.dy, ctx), ctx), ctx)
    kappa = lc.standard_part(lc.div(dtau, ds, ctx))
    if kappa == 0.0 or _straight(jet, kappa * jet.speed**2):
        raise _infinite(t, "contingence angle is of higher order than the arc")
    return kappa


def radius_contingence(curve: Parametric, t: float, ctx: TruncationContext | None = None) -> float:
    """``rho = 1 / |st(dtau / sqrt(dx^2 + dy^2))|``."""
    jet = _jet(curve, t, ctx)
    return 1.0 / abs(_signed_curvature(curve, t, jet))


def _arc_increment(jet: _Jet) -> LCNumber:
    ctx = jet.ctx
    speed = lc.lc_sqrt(lc.add(lc.mul(jet.vx, jet.vx, ctx), lc.mul(jet.vy, jet.vy, ctx), ctx), ctx)
    return lc.integrate_eps(speed)


def radius_chord(curve: Parametric, t: float, ctx: TruncationContext | None = None) -> float:
    """``rho = st(i^2 / (2 gamma))``.

    ``i`` is the arclength from ``t`` to ``t + eps``; the same length laid
    along the tangent ends ``gamma`` away from the curve point ``P(t + eps)``.
    """
    jet = _jet(curve, t, ctx)
    ctx = jet.ctx
    i = _arc_increment(jet)
    tx, ty = jet.velocity[0] / jet.speed, jet.velocity[1] / jet.speed
    # first-order parts agree exactly in theory; what is left is rounding
    gx = _drop_below(lc.sub(jet.dx, lc.scale(i, tx), ctx), 2)
    gy = _drop_below(lc.sub(jet.dy, lc.scale(i, ty), ctx), 2)
    second = math.hypot(lc.coefficient(gx, 2), lc.coefficient(gy, 2))
    if second == 0.0 or _straight(jet, 2.0 * second):
        raise _infinite(t, "chord deviation vanishes to second order")
    gamma = lc.lc_sqrt(lc.add(lc.mul(gx, gx, ctx), lc.mul(gy, gy, ctx), ctx), ctx)
    return lc.standard_part(lc.div(lc.mul(i, i, ctx), lc.scale(gamma, 2.0), ctx))


def _normal_intersection(curve: Parametric, t: float, jet: _Jet) -> tuple[tuple[float, float], float]:
    """Center from the normals at ``t`` and ``t + eps``, plus ``st`` of its distance."""
    ctx = jet.ctx
    v0x, v0y = jet.velocity
    # points X = P(t) + lam * (-v0y, v0x) on the first normal; the second
    # normal is (X - P(t+eps)) . v(t+eps) = 0
    denom = _cross_with_v0(jet)
    if lc.is_zero(denom) or _straight(jet, lc.coefficient(denom, 1)):
        raise _infinite(t, "normals are parallel")
    num = lc.add(lc.mul(jet.dx, jet.vx, ctx), lc.mul(jet.dy, jet.vy, ctx), ctx)
    lam = lc.div(num, denom, ctx)
    if lc.is_infinite(lam):
        raise _infinite(t, "normals meet at an infinite distance")
    cx = lc.add(lc.from_real(jet.position[0]), lc.scale(lam, -v0y), ctx)
    cy = lc.add(lc.from_real(jet.position[1]), lc.scale(lam, v0x), ctx)
    r = lc.scale(lc.lc_abs(lam), jet.speed)
    return (lc.standard_part(cx), lc.standard_part(cy)), lc.standard_part(r)


def center_normals(curve: Parametric, t: float, ctx: TruncationContext | None = None) -> tuple[float, float]:
    """Standard part of the meeting point of two infinitely close normals."""
    jet = _jet(curve, t, ctx)
    return _normal_intersection(curve, t, jet)[0]


def osculating(curve: Parametric, t: float, ctx: TruncationContext | None = None) -> CurvaturePoint:
    """Radius and center by every construction, cross-checked.

    The reported ``rho`` is the chord-deviation value.  Raises
    :class:`CurvatureError` if any construction fails or two of them disagree
    by more than ``1e-8 * (1 + rho)``.
    """
    jet = _jet(curve, t, ctx)
    kappa = _signed_curvature(curve, t, jet)
    rho_angle = 1.0 / abs(kappa)
    rho = radius_chord(curve, t, ctx)
    center, r = _normal_intersection(curve, t, jet)
    (x, y), (vx, vy) = jet.position, jet.velocity
    side = math.copysign(1.0, kappa)
    center_from_rho = (x - side * rho * vy / jet.speed, y + side * rho * vx / jet.speed)
    tol = _AGREEMENT_TOL * (1.0 + rho)
    checks = {
        "contingence vs chord radius": abs(rho_angle - rho),
        "normal-intersection distance vs radius": abs(r - rho),
        "center by normals vs center by radius": math.dist(center, center_from_rho),
    }
    for what, gap in checks.items():
        if not gap <= tol:
            raise CurvatureError(CurvatureErrorKind.EVALUATION_FAILURE,
                                 f"at t={t!r}: {what} differ by {gap:.3g} (> {tol:.3g})")
    return CurvaturePoint(
        t=float(t),
        position=(x, y),
        tau=math.atan2(vy, vx),
        rho=rho,
        center=center,
        method=CurvatureMethod.CHORD_DEVIATION,
    )
