import math

import numpy as np
import pytest

from haytham.euclid import (
    arc_point,
    axis_division_ratio,
    axis_intersection,
    build_figure,
    figure_svg,
    local_eta,
    verify_figure_identities,
)
from haytham.geometry import DegenerateError, DomainError, Point2
from haytham.lemma import f_ratio

D = math.radians


def segment_ratio_oracle(t1, t2):
    """Division ratio from the crossing parameter of line P(s) = p + s(q - p) with y = 0.

    For two points above the axis the crossing lies on the extension; it is
    found by bisection on s and the ratio is |s| / |s - 1|.
    """
    p, q = arc_point(t1), arc_point(t2)
    if p.y < q.y:
        lo, hi = -1e6, 0.0
    else:
        lo, hi = 1.0, 1e6
    glo = p.y + lo * (q.y - p.y)
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        gm = p.y + mid * (q.y - p.y)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    return abs(s) / abs(s - 1)


def test_example_figure_ratio():
    fig = build_figure(D(40), D(70), 0.5)
    di_ie = fig.D.dist(fig.I) / fig.I.dist(fig.E)
    assert di_ie == pytest.approx(math.sin(D(40)) / math.sin(D(20)), rel=1e-12)
    assert di_ie == pytest.approx(1.87939, abs=1e-5)
    assert di_ie == pytest.approx(segment_ratio_oracle(D(40), D(20)), rel=1e-12)
    t = verify_figure_identities(fig)
    assert all(s.passed for s in t.steps[:6])


def test_primary_points_on_circle_and_finite():
    fig = build_figure(D(30), D(60), 1 / 3)
    for name in "ACDE":
        assert getattr(fig, name).norm() == pytest.approx(1.0, abs=1e-12)
    assert all(math.isfinite(p.x) and math.isfinite(p.y) for p in fig.points().values())
    assert fig.J.x == pytest.approx(1 / math.cos(D(20)), rel=1e-12)


def test_degenerate_and_domain():
    with pytest.raises(DegenerateError):
        build_figure(D(30), D(60), 0.5)  # D coincides with C
    with pytest.raises(DomainError):
        build_figure(D(60), D(30), 0.5)
    with pytest.raises(DegenerateError, match="DE"):
        axis_intersection(Point2(0.0, 1.0), Point2(1.0, 1.0), "DE")


def test_close_to_y_all_steps():
    y = D(60)
    t = verify_figure_identities(build_figure(y - D(0.1), y, 1 / 3))
    assert t.overall, t.report()


def test_ratio_law_random_pairs():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(10_000):
        t1, t2 = rng.uniform(1e-3, math.pi - 1e-3, 2)
        if abs(t1 - t2) < 1e-3:
            continue
        r = axis_division_ratio(t1, t2)
        worst = max(worst, abs(r - math.sin(t1) / math.sin(t2)) / (math.sin(t1) / math.sin(t2)))
    assert worst < 1e-12


def test_menelaus_random_figures():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        x, y = sorted(rng.uniform(0.01, math.pi / 2, 2))
        c = rng.uniform(0.02, 0.98)
        try:
            fig = build_figure(x, y, c)
        except DegenerateError:
            continue
        steps = {s.name: s for s in verify_figure_identities(fig)}
        for name, s in steps.items():
            if s.relation == "=":
                assert s.residual < 1e-10, name


def test_local_eta_examples():
    y, c = D(60), 1 / 3
    eta = local_eta(y, c)
    assert eta > 0
    assert f_ratio(y - eta / 2, c) > f_ratio(y, c)
    assert local_eta(D(89), 11 / 12) > 0


def test_local_eta_neighbourhood_really_verified():
    y, c = D(45), 0.7
    eta = local_eta(y, c)
    for k in range(1, 10):
        x = y - eta * k / 10.5
        if math.isclose(x, c * y):
            continue
        assert verify_figure_identities(build_figure(x, y, c)).overall


def test_svg():
    text = figure_svg(build_figure(D(40), D(70), 0.5))
    assert text.startswith("<?xml") and 'version="1.1"' in text and text.rstrip().endswith("</svg>")
