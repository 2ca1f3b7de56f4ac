"""Plane curves: polylines and parametric pairs of expressions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import expr as ex
from .expr import Expr

__all__ = ["Polyline", "Parametric", "Curve", "discretize"]


@dataclass(frozen=True, eq=False)
class Polyline:
    """Vertices as an ``(m, 2)`` array; consecutive vertices are distinct."""

    vertices: np.ndarray

    def __init__(self, vertices: Sequence[Sequence[float]] | np.ndarray):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError(f"vertices must be a list of (x, y) pairs, got shape {v.shape}")
        if v.shape[0] < 2:
            raise ValueError("a polyline needs at least two vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        steps = np.diff(v, axis=0)
        if np.any(np.all(steps == 0.0, axis=1)):
            raise ValueError("consecutive vertices must be distinct")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def segment_lengths(self) -> np.ndarray:
        d = np.diff(self.vertices, axis=0)
        return np.hypot(d[:, 0], d[:, 1])

    @property
    def directions(self) -> np.ndarray:
        d = np.diff(self.vertices, axis=0)
        return np.arctan2(d[:, 1], d[:, 0])

    @property
    def length(self) -> float:
        return math.fsum(self.segment_lengths.tolist())

    def transformed(self, angle: float = 0.0, shift: tuple[float, float] = (0.0, 0.0)) -> Polyline:
        """Rotate by ``angle`` about the origin, then translate."""
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return Polyline(self.vertices @ rot.T + np.asarray(shift, dtype=float))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polyline) and np.array_equal(self.vertices, other.vertices)

    def __hash__(self) -> int:
        return hash(self.vertices.tobytes())


@dataclass(frozen=True)
class Parametric:
    x: Expr
    y: Expr
    t0: float
    t1: float
    var: str = field(default="t")

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)) or not self.t0 < self.t1:
            raise ValueError(f"need finite t0 < t1, got [{self.t0}, {self.t1}]")

    @classmethod
    def from_text(cls, x: str, y: str, t0: float, t1: float, var: str = "t") -> Parametric:
        return cls(ex.parse(x, [var]), ex.parse(y, [var]), float(t0), float(t1), var)

    def point(self, t: float) -> tuple[float, float]:
        env = {self.var: t}
        return ex.eval_real(self.x, env), ex.eval_real(self.y, env)


Curve = Union[Polyline, Parametric]


def discretize(curve: Parametric, segments: int) -> Polyline:
    """Polyline through ``segments + 1`` equally spaced parameter values."""
    if segments < 1:
        raise ValueError("segments must be >= 1")
    t = np.linspace(curve.t0, curve.t1, segments + 1)
    env = {curve.var: t}
    x = np.broadcast_to(ex.eval_array(curve.x, env), t.shape)
    y = np.broadcast_to(ex.eval_array(curve.y, env), t.shape)
    pts = np.column_stack([x, y])
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0.0, axis=1)
    pts = pts[keep]
    if len(pts) < 2:
        raise ValueError("curve discretizes to fewer than two distinct vertices")
    return Polyline(pts)
