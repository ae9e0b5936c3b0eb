import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haytham.geometry import (
    DegenerateError,
    DomainError,
    Interval,
    MediantPreconditionError,
    NoShadowError,
    Point2,
    Vec3,
    central_projection,
    chord_of_arc,
    conic_fit_residual,
    mediant_check,
    ptolemy_check,
)
from haytham.gnomonics import diurnal_circle_images, hour_line, SundialConfig, sun_direction

from oracles import shadow_by_linear_solve

D = math.radians


def test_chord_examples():
    assert chord_of_arc(math.pi) == pytest.approx(2.0, abs=1e-15)
    assert chord_of_arc(math.pi / 3) == pytest.approx(1.0, abs=1e-15)
    assert chord_of_arc(D(20)) == pytest.approx(0.347296, abs=1e-6)


@pytest.mark.parametrize("theta", [0.0, 2 * math.pi, -1.0, 7.0])
def test_chord_rejects_out_of_range(theta):
    with pytest.raises(DomainError):
        chord_of_arc(theta)


def test_chord_over_arc_decreasing():
    th = np.linspace(1e-3, math.pi - 1e-3, 4000)
    r = [chord_of_arc(t) / t for t in th]
    assert np.all(np.diff(r) < 0)


def test_ptolemy_examples():
    assert ptolemy_check(D(30), D(60))
    assert math.sin(D(60)) / math.sin(D(30)) == pytest.approx(1.7321, abs=1e-4)
    assert ptolemy_check(D(45), D(90))
    eps = 1e-6
    assert ptolemy_check(eps, 2 * eps)
    assert math.sin(2 * eps) / math.sin(eps) == pytest.approx(2.0, rel=1e-10)
    with pytest.raises(DomainError):
        ptolemy_check(D(60), D(30))


def test_mediant_examples():
    assert mediant_check(3, 4, 2, 2)
    assert mediant_check(2, 3, 1, 1)


def test_mediant_precondition_distinct_from_failure():
    with pytest.raises(MediantPreconditionError):
        mediant_check(1, 4, 2, 2)  # a < c
    with pytest.raises(MediantPreconditionError):
        mediant_check(3, 2, 2, 2)  # a/b > c/d


@given(
    st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.01, 0.99), st.floats(0.01, 0.99)
)
def test_mediant_holds_under_its_hypotheses(a, b, s, t):
    # a/b < c/d is t < s; keep a margin so rounding cannot make the ratios equal
    if not t < s * (1 - 1e-9):
        return
    c, d = a * s, b * t
    assert mediant_check(a, b, c, d)


def test_projection_zenith_and_south():
    assert central_projection(Vec3(0.0, 0.0, 1.0)) == Point2(0.0, 0.0)
    p = central_projection(Vec3.unit(0.0, -1.0, 1.0))
    assert p.x == pytest.approx(0.0, abs=1e-15)
    assert p.y == pytest.approx(1.0, abs=1e-15)


def test_projection_diurnal_sample_matches_linear_solve():
    v = sun_direction(D(30), D(23.5), D(60))
    p = central_projection(v, 2.5)
    u, w = shadow_by_linear_solve(v, 2.5)
    assert p.x == pytest.approx(u, abs=1e-12)
    assert p.y == pytest.approx(w, abs=1e-12)


def test_projection_matches_linear_solve_on_random_directions():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10_000):
        v = rng.normal(size=3)
        v[2] = abs(v[2]) + 0.05
        v = Vec3.unit(*v)
        g = float(rng.uniform(0.1, 5.0))
        p = central_projection(v, g)
        u, w = shadow_by_linear_solve(v, g)
        worst = max(worst, abs(p.x - u) / max(1, abs(u)), abs(p.y - w) / max(1, abs(w)))
    assert worst < 1e-12


def test_projection_rejects_below_horizon():
    with pytest.raises(NoShadowError):
        central_projection(Vec3(1.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        central_projection(Vec3(0.0, 0.0, 1.0), g=0.0)


def test_unit_vectors_renormalised():
    v = Vec3.unit(3.0, 4.0, 12.0)
    assert abs(v.norm() - 1.0) <= 1e-12


def test_conic_circle_points():
    pts = [(math.cos(t), math.sin(t)) for t in np.linspace(0.1, 5.5, 6)]
    assert conic_fit_residual(pts) < 1e-9


def test_conic_diurnal_circle_images():
    assert conic_fit_residual(diurnal_circle_images(D(30), D(-20), 6)) < 1e-9


def test_conic_hour_line_is_not_a_conic():
    cfg = SundialConfig(D(30), 1 / 12)
    pts = hour_line(cfg, 33).images()
    assert conic_fit_residual(pts) > 1e-3


def test_conic_residual_order_invariant():
    rng = np.random.default_rng(1)
    pts = hour_line(SundialConfig(D(30), 1 / 12), 33).images()
    base = conic_fit_residual(pts)
    for _ in range(5):
        assert conic_fit_residual(pts[rng.permutation(len(pts))]) == pytest.approx(base, abs=1e-12)


def test_conic_needs_six_points_and_non_degenerate():
    with pytest.raises(DomainError):
        conic_fit_residual([(0, 0)] * 5)
    with pytest.raises(DegenerateError):
        conic_fit_residual([(1.0, 2.0)] * 7)


def test_interval():
    iv = Interval(1.0, 2.0)
    assert 1.5 in iv and 2.0 in iv and 2.1 not in iv
    assert iv.issubset(Interval(0.0, 3.0))
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)


@settings(max_examples=200)
@given(st.floats(0.01, math.pi / 2), st.floats(0.0, 2 * math.pi))
def test_projection_is_scaled_by_gnomon(alt, az):
    v = Vec3.unit(math.cos(alt) * math.sin(az), math.cos(alt) * math.cos(az), math.sin(alt))
    p1, p3 = central_projection(v, 1.0), central_projection(v, 3.0)
    assert p3.x == pytest.approx(3 * p1.x, rel=1e-12, abs=1e-12)
    assert p3.y == pytest.approx(3 * p1.y, rel=1e-12, abs=1e-12)
