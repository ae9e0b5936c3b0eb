"""Cartesian reconstruction of the local proof of the lemma.

All points live on the unit circle centred at the origin, with B = (1, 0) and
the axis the diameter through B (the x-axis). A, C, D, E sit at arcs y, cy,
x, cx from B on the upper half. Every chord that crosses the axis divides
in the ratio of the sines of its endpoints' arcs, which turns
f(x) > f(y) into DI/IE > AH/HC; two Menelaus decompositions and the tangent
constructions at A and C then reduce it to comparisons the figure can check.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .geometry import DegenerateError, DomainError, Point2, chord_of_arc
from .lemma import HALF_PI, HourFraction, f_ratio
from .svg import Canvas
from .transcript import ProofTranscript

log = logging.getLogger(__name__)

ETA_RESOLUTION = 1e-9
ETA_SAMPLES = 32
PARALLEL_TOL = 1e-15


def arc_point(theta: float) -> Point2:
    return Point2(math.cos(theta), math.sin(theta))


def axis_intersection(p: Point2, q: Point2, label: str = "line") -> Point2:
    """Where line pq meets the axis y = 0."""
    dy = p.y - q.y
    if abs(dy) <= PARALLEL_TOL * max(1.0, abs(p.y), abs(q.y)):
        raise DegenerateError(f"{label} is parallel to the axis")
    t = p.y / dy
    return Point2(p.x + t * (q.x - p.x), 0.0)


def axis_division_ratio(theta1: float, theta2: float) -> float:
    """P1X / XP2 for the chord between arcs theta1, theta2 and X its axis crossing."""
    p1, p2 = arc_point(theta1), arc_point(theta2)
    x = axis_intersection(p1, p2)
    return p1.dist(x) / x.dist(p2)


def _point_on_ac_with_ratio(a: Point2, c: Point2, ratio: float) -> Point2:
    """Point P on ray AC beyond C with AP / PC = ratio (> 1)."""
    lam = ratio / (ratio - 1.0)
    return a + (c - a).scaled(lam)


def lemma1_upper(alpha: float, beta: float) -> float:
    v, u = (alpha + beta) / 2, (beta - alpha) / 2
    return (math.sin(v) + math.sin(u)) / (math.sin(v) - math.sin(u))


@dataclass(frozen=True)
class LocalProofFigure:
    x: float
    y: float
    c: float
    B: Point2
    A: Point2
    C: Point2
    D: Point2
    E: Point2
    I: Point2  # DE on the axis
    H: Point2  # AC on the axis
    W: Point2  # DC on the axis
    R: Point2  # CE on the axis
    U: Point2  # AD on the axis
    J: Point2  # tangent at C on the axis
    O: Point2  # on the tangent at A, AO = (arc AD / arc CE) * CJ
    N: Point2  # O projected onto the axis parallel to AC
    T: Point2  # on AC beyond C, AT/TC = arc AD / arc CE
    S: Point2  # on AC beyond C, AS/SC = upper end of the lemma-1 bracket

    @property
    def arc_ratio(self) -> float:
        """beta/alpha = arc AD / arc CE (= 1/c)."""
        return (self.y - self.x) / (self.c * (self.y - self.x))

    def points(self) -> dict[str, Point2]:
        return {k: getattr(self, k) for k in "BACDEIHWRUJONTS"}


def build_figure(x: float, y: float, c: float) -> LocalProofFigure:
    c = HourFraction(c)
    if not 0.0 < x < y <= HALF_PI:
        raise DomainError(f"need 0 < x < y <= pi/2, got x={x!r}, y={y!r}")
    if math.isclose(x, c * y, rel_tol=0.0, abs_tol=1e-15):
        raise DegenerateError("D coincides with C (x = cy)")
    A, C, D, E = arc_point(y), arc_point(c * y), arc_point(x), arc_point(c * x)
    I = axis_intersection(D, E, "DE")
    H = axis_intersection(A, C, "AC")
    W = axis_intersection(D, C, "DC")
    R = axis_intersection(C, E, "CE")
    U = axis_intersection(A, D, "AD")
    # tangent at C meets the axis at (sec cy, 0)
    J = axis_intersection(C, C + Point2(math.sin(c * y), -math.cos(c * y)), "tangent at C")
    ratio = (y - x) / (c * (y - x))
    tangent_a = Point2(math.sin(y), -math.cos(y))
    O = A + tangent_a.scaled(ratio * C.dist(J))
    N = axis_intersection(O, O + (C - A), "parallel to AC through O")
    T = _point_on_ac_with_ratio(A, C, ratio)
    S = _point_on_ac_with_ratio(A, C, lemma1_upper(c * y, y))
    return LocalProofFigure(x, y, float(c), Point2(1.0, 0.0), A, C, D, E, I, H, W, R, U, J, O, N, T, S)


def verify_figure_identities(fig: LocalProofFigure) -> ProofTranscript:
    """Check each identity and each coarse bound of the local proof on ``fig``.

    Steps 1-4 hold for every valid figure. The AU > AN bound holds only when
    D is close enough to A; its failure marks the edge of the neighbourhood.
    """
    A, C, D, E = fig.A, fig.C, fig.D, fig.E
    x, y, c = fig.x, fig.y, fig.c
    DI_IE = D.dist(fig.I) / fig.I.dist(E)
    AH_HC = A.dist(fig.H) / fig.H.dist(C)
    DW_WC = D.dist(fig.W) / fig.W.dist(C)
    CR_RE = C.dist(fig.R) / fig.R.dist(E)
    AU_UD = A.dist(fig.U) / fig.U.dist(D)
    arc_ad, arc_ce = y - x, c * (y - x)

    t = ProofTranscript(f"local figure x={x!r} y={y!r} c={c!r}")
    t.add("DI/IE = sin x / sin cx", DI_IE, "=", math.sin(x) / math.sin(c * x))
    t.add("AH/HC = sin y / sin cy", AH_HC, "=", math.sin(y) / math.sin(c * y))
    t.add("Menelaus DCE: DI/IE = (DW/WC)(CR/RE)", DI_IE, "=", DW_WC * CR_RE)
    t.add("Menelaus ADC: AH/HC = (AU/UD)(DW/WC)", AH_HC, "=", AU_UD * DW_WC)
    t.add("chord/arc: AD/arc AD < CE/arc CE", chord_of_arc(arc_ad) / arc_ad, "<", chord_of_arc(arc_ce) / arc_ce)
    t.add("CR < CJ", C.dist(fig.R), "<", C.dist(fig.J))
    t.add("AN < AU", A.dist(fig.N), "<", A.dist(fig.U))
    t.add("AO < AN", A.dist(fig.O), "<", A.dist(fig.N))
    t.add("AH/HC <= AT/TC", AH_HC, "<=", A.dist(fig.T) / fig.T.dist(C))
    t.add("AT/TC <= AS/SC", A.dist(fig.T) / fig.T.dist(C), "<=", A.dist(fig.S) / fig.S.dist(C))
    t.add("O above the axis", 0.0, "<", fig.O.y)
    return t


def _neighbourhood_ok(y: float, c: float, eta: float, fy: float, samples: int) -> bool:
    for k in range(1, samples + 1):
        x = y - eta * k / (samples + 1)
        try:
            fig = build_figure(x, y, c)
        except (DegenerateError, DomainError):
            return False
        if not verify_figure_identities(fig).overall or not f_ratio(x, c) > fy:
            return False
    return True


def local_eta(y: float, c: float, *, samples: int = ETA_SAMPLES, resolution: float = ETA_RESOLUTION) -> float:
    """Radius eta of a left neighbourhood (y - eta, y) on which the local proof goes through.

    Bisection finds the largest eta (to ``resolution``) for which every one of
    ``samples`` evenly spaced x in (y - eta, y) yields a figure whose steps all
    pass and f(x) > f(y). If bisection cannot certify anything the resolution
    floor is returned and a warning is logged.
    """
    c = HourFraction(c)
    if not 0.0 < y <= HALF_PI:
        raise DomainError(f"need 0 < y <= pi/2, got {y!r}")
    fy = f_ratio(y, c)
    if _neighbourhood_ok(y, c, y, fy, samples):
        return y
    lo, hi = 0.0, y
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if _neighbourhood_ok(y, c, mid, fy, samples):
            lo = mid
        else:
            hi = mid
    if lo <= 0.0:
        log.warning("local_eta(y=%r, c=%r) degenerated to the resolution floor", y, float(c))
        return resolution
    return lo


def figure_svg(fig: LocalProofFigure, width: int = 800) -> str:
    pts = fig.points()
    far = max(abs(p.x) for p in pts.values())
    xmax = min(max(1.2, far + 0.1), 6.0)
    canvas = Canvas(-1.2, xmax, -0.3, 1.2, width=width)
    canvas.circle((0.0, 0.0), 1.0)
    canvas.line((-1.2, 0.0), (xmax, 0.0), stroke="grey")
    segs = [("D", "I"), ("A", "H"), ("D", "W"), ("C", "R"), ("A", "U"), ("C", "J"), ("A", "O"), ("O", "N")]
    for p, q in segs:
        canvas.line(pts[p], pts[q], stroke="steelblue")
    for name, p in pts.items():
        if p.x <= xmax:
            canvas.dot(p, name)
    return canvas.render(f"local proof figure x={math.degrees(fig.x):.4g} y={math.degrees(fig.y):.4g} c={fig.c:.4g}")
