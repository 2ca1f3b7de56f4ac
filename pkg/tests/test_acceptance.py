"""The ten acceptance criteria, one test each.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import os
import subprocess
import sys
import time

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cauchykit import calculus as calc
from cauchykit import crofton as cr
from cauchykit import curvature as cv
from cauchykit import expr as ex
from cauchykit import lc
from cauchykit.calculus import DeltaKernelParams
from cauchykit.curves import Polyline

import test_calculus as tc
import test_lc as tl
from corpus import (CURVE_CORPUS, CURVE_DERIVATIVES, DERIVATIVE_CORPUS, circle, crofton_corpus, curve_samples,
                    unit_segment)
from oracles import classical_radius, midpoint_integral, richardson_derivative
from strategies import lc_numbers, with_zero
from test_cli import FIXTURES, SEGMENT

P = ex.parse
eps = lc.epsilon()
RESULTS: dict[int, tuple[bool, str]] = {}


def criterion_1():
    """Quadrature length equals the segment sum on 100 random polylines."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 201))
        poly = Polyline(rng.uniform(-10, 10, size=(m + 1, 2)))
        rel = abs(cr.length_theorem1(poly) - poly.length) / poly.length
        worst = max(worst, rel)
    assert worst <= 1e-10, worst
    return f"worst relative gap {worst:.2e}"


def criterion_2():
    """n-line error bound for n >= 4 over a 360-offset sweep; small-n violations reported."""
    worst_ratio = 0.0
    for name, poly in crofton_corpus().items():
        reports = cr.bound_sweep(poly, [4, 8, 16, 32, 64], offsets=360)
        assert not cr.bound_violations(reports), name
        worst_ratio = max(worst_ratio, max(r.observed_error / r.bound for r in reports))
    small = cr.bound_sweep(unit_segment(), [2, 3], offsets=360)
    bad = cr.bound_violations(small)
    assert bad, "expected violations for n in {2, 3}"
    assert bad == [r for r in small if r.observed_error > r.bound]
    out = _cli(["--format", "json", "length", SEGMENT, "--n", "2,3", "--offsets", "360"])
    assert json.loads(out.stdout)["bound_violations"] == len(bad)
    return f"max error/bound {worst_ratio:.3f} for n>=4; {len(bad)} small-n violations reported"


def criterion_3():
    """Worst-offset error on the unit segment decays like n^-2."""
    ns = [4, 8, 16, 32, 64, 128]
    worst = cr.max_error_by_n(cr.bound_sweep(unit_segment(), ns, offsets=360))
    slope = float(np.polyfit(np.log(ns), np.log([worst[n].observed_error for n in ns]), 1)[0])
    assert -2.3 <= slope <= -1.7, slope
    return f"slope {slope:.3f}"


def criterion_4():
    """Cauchy-kernel delta integral."""
    alphas = [1e-1, 1e-2, 1e-3, 1e-4, 1e-6]
    windows = [1e-2, 5e-2, 1e-1, 0.5, 1.0]
    one = P("1")
    gap = max(abs(calc.delta_kernel_integral(one, DeltaKernelParams(0.0, a, w)) - math.atan(w / a))
              for a in alphas for w in windows)
    assert gap <= 1e-10, gap
    cos_err = abs(calc.delta_kernel_integral(P("cos(m)"), DeltaKernelParams(0.0, 1e-6, 1e-2)) - math.pi / 2)
    assert cos_err <= 1e-3, cos_err
    diag = max(abs(calc.delta_kernel_integral(one, DeltaKernelParams(0.0, w, w)) - math.pi / 4) for w in windows)
    assert diag <= 1e-10, diag
    return f"grid gap {gap:.1e}, cos error {cos_err:.1e}, alpha=eps gap {diag:.1e}"


def criterion_5():
    """Curvature: circles, parabola vertex, method agreement, classical oracle."""
    for R in (0.5, 1.0, 2.0):
        c = circle(R)
        for t in (0.0, 1.0, 2.5, 4.0):
            x, y = c.point(t)
            by_normals = math.dist((x, y), cv.center_normals(c, t))
            for rho in (cv.radius_contingence(c, t), cv.radius_chord(c, t), by_normals):
                assert abs(rho - R) <= 1e-9, (R, t, rho)
    vertex = cv.osculating(CURVE_CORPUS["parabola"][0], 0.0)
    assert abs(vertex.rho - 0.5) <= 1e-8 and math.dist(vertex.center, (0.0, 0.5)) <= 1e-8
    worst = 0.0
    for name, (c, _) in CURVE_CORPUS.items():
        for t in curve_samples(name, 100):
            point = cv.osculating(c, t)  # raises if methods differ by more than 1e-8 (1 + rho)
            x, y = point.position
            by_normals = math.dist((x, y), point.center)
            for rho in (cv.radius_contingence(c, t), by_normals):
                assert abs(rho - point.rho) <= 1e-8 * (1 + point.rho), (name, t)
            expected = classical_radius(*CURVE_DERIVATIVES[name](t))
            worst = max(worst, abs(point.rho - expected) / expected)
    assert worst <= 1e-8, worst
    return f"worst relative gap to classical formula {worst:.1e} over 600 samples"


def criterion_6():
    """Derivatives against Richardson extrapolation; sin(t)/t at 0."""
    worst = 0.0
    for source, x0 in DERIVATIVE_CORPUS:
        tree = P(source, ["t"])
        expected = richardson_derivative(lambda t: ex.eval_real(tree, {"t": t}), x0)
        gap = abs(calc.derivative(tree, x0) - expected)
        assert gap <= 1e-8 + 1e-8 * abs(expected), (source, gap)
        worst = max(worst, gap)
    limit = calc.limit_at(P("sin(t)/t"), 0.0)
    assert abs(limit - 1.0) <= 1e-12
    return f"{len(DERIVATIVE_CORPUS)} derivatives, worst gap {worst:.1e}"


def criterion_7():
    """1/t continuous at standard points; microcontinuity fails at eps."""
    f = P("1/t")
    for x0 in (0.1, 1.0, 10.0):
        assert calc.continuity_probe(f, x0).continuous, x0
    v = calc.microcontinuity_probe(f, eps, lc.mul(eps, eps))
    assert not v.continuous
    assert abs(lc.standard_part(v.difference) + 1.0) <= 1e-12
    return f"micro difference {lc.render(v.difference)[:40]}..."


def criterion_8():
    """Tail probe: non-uniform and uniform series."""
    limit = midpoint_integral(lambda t: math.sin(t) / t, 1.0, 2.0)
    rows = calc.sum_theorem_probe(P("sin(k*x)/k"), [1000, 10000])
    for r in rows:
        assert abs(r.tail_value - 0.6593) <= 2e-2, r
    for r in calc.sum_theorem_probe(P("sin(k*x)/k^2"), [1000, 10000]):
        assert r.tail_value <= 10 * math.log(r.n) / r.n, r
    return f"tails {rows[0].tail_value:.5f}, {rows[1].tail_value:.5f} (integral {limit:.5f})"


PROPERTY_SETTINGS = settings(max_examples=1000, derandomize=True, deadline=None, database=None,
                             suppress_health_check=list(HealthCheck))
PROPERTIES = [
    ("additive associativity", tl.check_add_associative, (with_zero(lc_numbers()),) * 3),
    ("distributivity", tl.check_distributive, (lc_numbers(),) * 3),
    ("multiplicative inverse", tl.check_inverse, (lc_numbers(),)),
    ("st homomorphism", tl.check_st_homomorphism, (tl.finite, tl.finite)),
    ("proximity equivalence", tl.check_proximity_equivalence, (tl.near,) * 3),
    ("order compatibility", tl.check_order_compatible, (lc_numbers(),) * 3),
    ("lift commutes with st", tl.check_lift_commutes, (st.sampled_from(sorted(lc.ANALYTIC_FUNCTIONS)), tl.finite)),
    ("continuity invariance", tc.check_continuity_invariance,
     (st.sampled_from(tc.INVARIANCE_POOL), tc.points, tc.increments)),
]


def criterion_9():
    """Field and standard-part properties, 1000 randomized cases each."""
    for _, check, strategies in PROPERTIES:
        PROPERTY_SETTINGS(given(*strategies)(check))()
    return f"{len(PROPERTIES)} properties x 1000 cases"


def _cli(args):
    return subprocess.run([sys.executable, "-m", "cauchykit", *args], capture_output=True, check=False)


def criterion_10():
    """CLI determinism and exit-code contract on ten fixtures."""
    for name, args, code in FIXTURES:
        first, second = _cli(args), _cli(args)
        assert first.returncode == code, (name, first.returncode, first.stderr)
        assert (first.stdout, first.stderr) == (second.stdout, second.stderr), name
    return f"{len(FIXTURES)} fixtures, exit codes match, output byte-identical"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_criterion(k: int) -> tuple[bool, str]:
    fn = CRITERIA[k - 1]
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except Exception as exc:  # reported, then re-raised by the pytest wrapper
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {fn.__doc__.splitlines()[0]} [{detail}] ({time.perf_counter() - start:.1f}s)"
    RESULTS[k] = (ok, line)
    print(line)
    return ok, line


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k):
    ok, line = run_criterion(k)
    if not ok:
        CRITERIA[k - 1]()  # rerun for the full traceback
        pytest.fail(line)


if __name__ == "__main__":
    failed = [k for k in range(1, 11) if not run_criterion(k)[0]]
    sys.exit(1 if failed else 0)
