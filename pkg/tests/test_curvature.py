import math

import pytest

from cauchykit import curvature as cv
from cauchykit import expr as ex
from cauchykit import lc
from cauchykit.curvature import CurvatureErrorKind
from cauchykit.curves import Parametric

from corpus import CURVE_CORPUS, CURVE_DERIVATIVES, circle, curve_samples
from oracles import classical_radius

METHODS = (cv.radius_contingence, cv.radius_chord)


def curve(x, y, t0=-10.0, t1=10.0):
    return Parametric.from_text(x, y, t0, t1)


@pytest.mark.parametrize("R", [0.1, 0.5, 1.0, 2.0, 7.25, 100.0])
def test_circle_is_exact(R):
    c = circle(R)
    for t in (0.0, 0.4, 2.0, 4.5):
        for method in METHODS:
            assert method(c, t) == pytest.approx(R, rel=1e-12)
        cx, cy = cv.center_normals(c, t)
        assert abs(cx) <= 1e-12 * R and abs(cy) <= 1e-12 * R


def test_parabola_vertex():
    p = curve("t", "t^2")
    point = cv.osculating(p, 0.0)
    assert point.rho == pytest.approx(0.5, abs=1e-8)
    assert point.center == pytest.approx((0.0, 0.5), abs=1e-8)
    assert point.position == (0.0, 0.0)
    assert point.tau == 0.0


def test_ellipse_and_sine():
    e = curve("2*cos(t)", "sin(t)", 0, 2 * math.pi)
    # b^2/a at the end of the major axis
    assert cv.radius_chord(e, 0.0) == pytest.approx(0.5, rel=1e-12)
    s = curve("t", "sin(t)")
    point = cv.osculating(s, math.pi / 2)
    assert point.rho == pytest.approx(1.0, rel=1e-12)
    assert point.center == pytest.approx((math.pi / 2, 0.0), abs=1e-12)


def test_tangent_angle():
    assert cv.tangent_angle(circle(), 0.0) == pytest.approx(math.pi / 2)
    assert cv.tangent_angle(curve("t", "t^2"), 0.5) == pytest.approx(math.atan(1.0))


def test_straight_line_has_infinite_radius():
    line = curve("1 + 2*t", "3 - t")
    for method in (*METHODS, cv.center_normals, cv.osculating):
        with pytest.raises(cv.CurvatureError) as info:
            method(line, 0.3)
        assert info.value.kind is CurvatureErrorKind.INFINITE_RADIUS


def test_inflection_has_infinite_radius():
    with pytest.raises(cv.CurvatureError) as info:
        cv.osculating(curve("t", "t^3"), 0.0)
    assert info.value.kind is CurvatureErrorKind.INFINITE_RADIUS


def test_cusp_is_degenerate():
    with pytest.raises(cv.CurvatureError) as info:
        cv.osculating(curve("t^2", "t^3"), 0.0)
    assert info.value.kind is CurvatureErrorKind.DEGENERATE_PARAMETRIZATION


def test_non_analytic_point_is_degenerate():
    with pytest.raises(cv.CurvatureError) as info:
        cv.radius_chord(curve("t", "t^(3/2)", 0, 1), 0.0)
    assert info.value.kind is CurvatureErrorKind.DEGENERATE_PARAMETRIZATION


def test_evaluation_failure():
    with pytest.raises(cv.CurvatureError) as info:
        cv.radius_chord(curve("t", "log(t)"), -1.0)
    assert info.value.kind is CurvatureErrorKind.EVALUATION_FAILURE


def test_window_below_minimum_is_rejected():
    with pytest.raises(ValueError):
        cv.radius_chord(circle(), 0.0, lc.TruncationContext(32, 3))
    assert cv.radius_chord(circle(), 0.0, lc.TruncationContext(32, 4)) == pytest.approx(1.0, rel=1e-12)


def test_row_layout():
    point = cv.osculating(circle(), 0.0)
    assert len(point.as_row()) == len(cv.CSV_COLUMNS)
    assert point.as_row()[-1] == "ChordDeviation"


@pytest.mark.parametrize("name", sorted(CURVE_CORPUS))
def test_methods_agree_and_match_classical_formula(name):
    c = CURVE_CORPUS[name][0]
    for t in curve_samples(name):
        point = cv.osculating(c, t)  # raises if the constructions disagree
        rho_angle = cv.radius_contingence(c, t)
        assert abs(rho_angle - point.rho) <= 1e-8 * (1 + point.rho)
        expected = classical_radius(*CURVE_DERIVATIVES[name](t))
        assert abs(point.rho - expected) <= 1e-8 * expected


@pytest.mark.parametrize("name", sorted(CURVE_CORPUS))
def test_reparametrization_invariance(name):
    c, (t0, t1) = CURVE_CORPUS[name]
    doubled = Parametric.from_text(
        _substitute(c.x), _substitute(c.y), t0 / 2, t1 / 2)
    for t in curve_samples(name, 10):
        a = cv.osculating(c, t)
        b = cv.osculating(doubled, t / 2)
        assert b.rho == pytest.approx(a.rho, rel=1e-10)
        assert b.center == pytest.approx(a.center, rel=1e-10, abs=1e-10)


def _substitute(tree):
    """Render ``tree`` with ``t`` replaced by ``2*t``."""
    def walk(node):
        if isinstance(node, ex.Variable):
            return ex.Binary("*", ex.Constant(2.0), node)
        if isinstance(node, ex.Unary):
            return ex.Unary(node.op, walk(node.child))
        if isinstance(node, ex.Binary):
            return ex.Binary(node.op, walk(node.left), walk(node.right))
        return node
    return ex.render(walk(tree))


@pytest.mark.parametrize("angle, shift", [(0.3, (1.0, -2.0)), (2.5, (0.0, 4.0))])
def test_rigid_motion_invariance(angle, shift):
    c, s = math.cos(angle), math.sin(angle)
    x, y = "2*cos(t)", "sin(t)"
    moved = Parametric.from_text(f"{c}*{x} - {s}*{y} + {shift[0]}", f"{s}*{x} + {c}*{y} + {shift[1]}",
                                 0, 2 * math.pi)
    base = Parametric.from_text(x, y, 0, 2 * math.pi)
    for t in (0.1, 1.0, 2.2):
        a, b = cv.osculating(base, t), cv.osculating(moved, t)
        assert b.rho == pytest.approx(a.rho, rel=1e-12)
        rotated = (c * a.center[0] - s * a.center[1] + shift[0], s * a.center[0] + c * a.center[1] + shift[1])
        assert b.center == pytest.approx(rotated, abs=1e-12)
