"""Adaptive composite Gauss-Legendre quadrature (vectorised over panels)."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = ["gauss_legendre", "adaptive_gauss_legendre"]


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def _panel_sums(f, a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ w)


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    *,
    order: int = 10,
    abs_tol: float = 1e-14,
    rel_tol: float = 1e-13,
    max_depth: int = 60,
    max_panels: int = 1 << 16,
) -> float:
    """Integrate ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``f`` receives a 1-d array of nodes.  Panels start at the given
    breakpoints (put kinks and peaks there) and are bisected until the
    ``order``-point rule agrees with the sum over both halves.
    """
    edges = np.asarray(breakpoints, dtype=float)
    a, b = edges[:-1], edges[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    coarse = _panel_sums(f, a, b, order)
    accepted: list[np.ndarray] = []
    span = edges[-1] - edges[0]
    for _ in range(max_depth):
        if a.size == 0:
            break
        m = 0.5 * (a + b)
        left = _panel_sums(f, a, m, order)
        right = _panel_sums(f, m, b, order)
        fine = left + right
        scale = float(np.sum(np.abs(fine)) + sum(np.sum(np.abs(p)) for p in accepted))
        tol = max(abs_tol, rel_tol * scale) * (b - a) / span
        # below this the difference is rounding noise, not truncation error
        noise = 64 * np.finfo(float).eps * (np.abs(left) + np.abs(right))
        ok = (np.abs(fine - coarse) <= np.maximum(tol, noise)) | (m <= a) | (m >= b)
        accepted.append(fine[ok])
        bad = ~ok
        if 2 * np.count_nonzero(bad) > max_panels:
            raise RuntimeError("adaptive quadrature did not converge within the panel limit")
        a = np.concatenate([a[bad], m[bad]])
        b = np.concatenate([m[bad], b[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    else:
        if a.size:
            raise RuntimeError("adaptive quadrature did not converge within the depth limit")
    parts = np.concatenate(accepted) if accepted else np.zeros(0)
    return math.fsum(parts.tolist())
