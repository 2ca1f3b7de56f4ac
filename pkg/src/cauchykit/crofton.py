"""Curve length from projections onto lines (Cauchy-Crofton).

``A(p)`` is the total length of the orthogonal projections of a polyline's
segments onto a line with direction ``p``.  Integrating over all directions
recovers the length exactly (``S = 1/4 * integral of A over [-pi, pi]``);
averaging over ``n`` equally spaced directions gives ``S ~ (pi/2) * M`` with
an error bounded by ``pi * M / (2 n^2)``.
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .curves import Polyline
from .quadrature import adaptive_gauss_legendre
from .rng import SplitMix64

__all__ = [
    "CroftonReport",
    "CSV_COLUMNS",
    "projection_sum",
    "length_theorem1",
    "length_theorem2",
    "bound_sweep",
    "max_error_by_n",
    "bound_violations",
    "random_line_estimate",
]


@dataclass(frozen=True)
class CroftonReport:
    n: int
    offset: float
    M: float
    estimate: float
    exact: float
    observed_error: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.observed_error <= self.bound

    def as_row(self) -> tuple:
        return astuple(self)


CSV_COLUMNS = tuple(f.name for f in fields(CroftonReport))


def projection_sum(poly: Polyline, p: float | np.ndarray) -> float | np.ndarray:
    """``A(p) = sum(s_j * |cos(theta_j - p)|)``; period ``pi`` in ``p``."""
    p_arr = np.asarray(p, dtype=float)
    s = poly.segment_lengths
    theta = poly.directions
    values = np.abs(np.cos(theta[None, :] - p_arr.reshape(-1, 1))) @ s
    if p_arr.ndim == 0:
        return float(values[0])
    return values.reshape(p_arr.shape)


def _kinks(poly: Polyline) -> np.ndarray:
    # |cos(theta - p)| has its corners where p = theta +- pi/2
    theta = poly.directions
    k = np.concatenate([theta + math.pi / 2, theta - math.pi / 2])
    k = np.mod(k + math.pi, 2 * math.pi) - math.pi
    return np.unique(np.concatenate([[-math.pi, math.pi], k]))


def length_theorem1(poly: Polyline) -> float:
    """Length as ``1/4`` of the integral of ``A`` over ``[-pi, pi]``.

    The integral is computed by adaptive Gauss-Legendre quadrature with panel
    edges at the kinks of ``A``; the closed form (each segment contributes
    ``4 * s_j``) is checked against it.
    """
    value = 0.25 * adaptive_gauss_legendre(lambda p: projection_sum(poly, p), _kinks(poly))
    closed = poly.length
    if abs(value - closed) > 1e-8 * closed:
        raise RuntimeError(f"quadrature length {value!r} disagrees with closed form {closed!r}")
    return value


def length_theorem2(poly: Polyline, n: int, offset: float = 0.0, *, exact: float | None = None) -> CroftonReport:
    """Average ``A`` over the ``n`` directions ``offset + k*pi/n``."""
    if n < 2:
        raise ValueError(f"need n >= 2 lines, got {n}")
    if exact is None:
        exact = length_theorem1(poly)
    p = offset + np.arange(n) * (math.pi / n)
    M = math.fsum(np.atleast_1d(projection_sum(poly, p)).tolist()) / n
    estimate = 0.5 * math.pi * M
    return CroftonReport(
        n=int(n),
        offset=float(offset),
        M=M,
        estimate=estimate,
        exact=exact,
        observed_error=abs(estimate - exact),
        bound=math.pi * M / (2 * n * n),
    )


def bound_sweep(poly: Polyline, n_list: Iterable[int], offsets: int = 1) -> list[CroftonReport]:
    """Reports for every ``n`` and each of ``offsets`` phases in ``[0, pi/n)``.

    The line set for ``n`` is invariant under a shift of ``pi/n``, so that
    interval covers every distinct configuration.
    """
    n_list = sorted(set(int(n) for n in n_list))
    if not n_list:
        raise ValueError("n_list must not be empty")
    if offsets < 1:
        raise ValueError("offsets must be >= 1")
    exact = length_theorem1(poly)
    reports = []
    for n in n_list:
        for j in range(offsets):
            reports.append(length_theorem2(poly, n, j * math.pi / (n * offsets), exact=exact))
    return reports


def max_error_by_n(reports: Sequence[CroftonReport]) -> dict[int, CroftonReport]:
    """The worst-offset report for each ``n``."""
    worst: dict[int, CroftonReport] = {}
    for r in reports:
        if r.n not in worst or r.observed_error > worst[r.n].observed_error:
            worst[r.n] = r
    return dict(sorted(worst.items()))


def bound_violations(reports: Sequence[CroftonReport]) -> list[CroftonReport]:
    """Reports whose observed error exceeds ``pi*M/(2n^2)``."""
    return [r for r in reports if not r.within_bound]


def random_line_estimate(poly: Polyline, samples: int, seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo length from ``samples`` uniform directions in ``[0, pi)``.

    Returns ``(estimate, standard_error)``.  Directions come from SplitMix64
    seeded with ``seed``, so results are reproducible.
    """
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    p = math.pi * SplitMix64(seed).uniform(samples)
    a = np.asarray(projection_sum(poly, p))
    mean = math.fsum(a.tolist()) / samples
    sd = float(np.std(a, ddof=1))
    return 0.5 * math.pi * mean, 0.5 * math.pi * sd / math.sqrt(samples)
