"""Double refraction of an axis-parallel beam by a glass sphere.

Axis coordinates: the sphere has radius 1 and centre 0, light travels in +x,
and the exit pole C sits at x = 1. V = 2 is one radius beyond the pole and
S = 1.5 the midpoint of CV. A ray entering with incidence i leaves the
sphere at polar angle i - 2d and crosses the axis at

    cos(i - 2d) + sin(i - 2d) / tan(2d),

provided i - 2d > 0. Larger incidences are rejected.
"""
from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .geometry import DomainError, Interval, MediantPreconditionError, Vec3, mediant_check
from .svg import Canvas
from .transcript import ProofTranscript, fmt

S_POINT = 1.5
V_POINT = 2.0
POLE = 1.0
RAY_CSV_HEADER = ("i_deg", "d_deg", "crossing_x")

# Ptolemy's air-to-glass table (i, r) in degrees; configuration data only.
PTOLEMY_AIR_GLASS = (
    (10.0, 7.0), (20.0, 13.5), (30.0, 19.5), (40.0, 25.0),
    (50.0, 30.0), (60.0, 34.5), (70.0, 38.5), (80.0, 42.0),
)


class RayGeometryError(DomainError):
    """The exit ray does not cross the axis beyond the sphere (i - 2d <= 0)."""

    def __init__(self, i: float, message: str = ""):
        self.i = i
        super().__init__(message or f"crossing inside/behind sphere at i = {math.degrees(i):.6g} deg")


@dataclass(frozen=True)
class SnellModel:
    n: float = 1.5

    def __post_init__(self):
        if not self.n > 1.0:
            raise DomainError(f"refractive index must exceed 1, got {self.n!r}")

    @property
    def max_incidence(self) -> float:
        return math.pi / 2

    def refraction(self, i: float) -> float:
        if not 0.0 <= i < math.pi / 2:
            raise DomainError(f"incidence {i!r} outside [0, pi/2)")
        return math.asin(math.sin(i) / self.n)

    def incidence(self, r: float) -> float:
        """Inverse of ``refraction`` (reversibility of the light path)."""
        s = self.n * math.sin(r)
        if not 0.0 <= s <= 1.0:
            raise DomainError(f"refraction angle {r!r} has no incidence")
        return math.asin(s)

    def validity_limit(self) -> float:
        """Incidence where i - 2d changes sign: 2 arccos(n/2)."""
        return 2.0 * math.acos(self.n / 2.0) if self.n < 2.0 else 0.0


@dataclass(frozen=True)
class TableModel:
    """Tabulated refraction, linearly interpolated in i; (0, 0) is implied."""

    rows: tuple[tuple[float, float], ...] = ((math.radians(40.0), math.radians(25.0)),)

    def __post_init__(self):
        rows = tuple((float(i), float(r)) for i, r in self.rows)
        if not rows:
            raise DomainError("empty refraction table")
        full = ((0.0, 0.0),) + rows
        for (i0, r0), (i1, r1) in zip(full, full[1:]):
            if not (i1 > i0 and r1 > r0):
                raise DomainError("table rows must increase strictly in both columns")
        if any(not r < i for i, r in rows):
            raise DomainError("table needs r < i on every row")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_degrees(cls, rows: Sequence[tuple[float, float]]) -> "TableModel":
        return cls(tuple((math.radians(i), math.radians(r)) for i, r in rows))

    @classmethod
    def ptolemy(cls) -> "TableModel":
        return cls.from_degrees(PTOLEMY_AIR_GLASS)

    def __str__(self):
        return f"table of {len(self.rows)} rows to {math.degrees(self.rows[-1][0]):g} deg"

    @property
    def _full(self):
        return ((0.0, 0.0),) + self.rows

    @property
    def max_incidence(self) -> float:
        return self.rows[-1][0]

    def refraction(self, i: float) -> float:
        full = self._full
        if not 0.0 <= i <= full[-1][0] * (1 + 1e-15):
            raise DomainError(f"incidence {math.degrees(i):.6g} deg outside the table")
        xs = [row[0] for row in full]
        k = bisect.bisect_left(xs, i)
        if k < len(xs) and math.isclose(xs[k], i, rel_tol=1e-15, abs_tol=0.0):
            return full[k][1]
        (i0, r0), (i1, r1) = full[k - 1], full[min(k, len(full) - 1)]
        return r0 + (r1 - r0) * (i - i0) / (i1 - i0)

    def incidence(self, r: float) -> float:
        full = self._full
        rs = [row[1] for row in full]
        if not 0.0 <= r <= rs[-1] * (1 + 1e-15):
            raise DomainError(f"refraction angle {math.degrees(r):.6g} deg outside the table")
        k = bisect.bisect_left(rs, r)
        if k < len(rs) and math.isclose(rs[k], r, rel_tol=1e-15, abs_tol=0.0):
            return full[k][0]
        (i0, r0), (i1, r1) = full[k - 1], full[min(k, len(full) - 1)]
        return i0 + (i1 - i0) * (r - r0) / (r1 - r0)

    def validity_limit(self) -> float:
        return validity_limit_by_root(self)


RefractionModel = Union[SnellModel, TableModel]


def deviation(model: RefractionModel, i: float) -> float:
    """d = i - r(i)."""
    return i - model.refraction(i)


def excess(model: RefractionModel, i: float) -> float:
    """i - 2d, the polar angle of the exit point."""
    return i - 2.0 * deviation(model, i)


def validity_limit_by_root(model: RefractionModel, lo: float = math.radians(1.0)) -> float:
    """Root of i - 2d found numerically; the table's end if there is no sign change."""
    hi = model.max_incidence * (1 - 1e-12)
    if excess(model, hi) > 0.0:
        return model.max_incidence
    return brentq(lambda i: excess(model, i), lo, hi, xtol=1e-14)


@dataclass(frozen=True)
class RayTrace:
    i: float
    d: float
    entry: Vec3
    exit: Vec3
    direction_out: Vec3
    crossing_x: float
    exit_residual: float
    crossing_residual: float


def closed_form_crossing(i: float, d: float) -> float:
    e = i - 2.0 * d
    return math.cos(e) + math.sin(e) / math.tan(2.0 * d)


def _refract(direction: Vec3, normal: Vec3, angle_out: float) -> Vec3:
    """Rotate ``direction`` into the plane it spans with ``normal`` at ``angle_out`` from ``-normal``.

    ``normal`` points back toward the incoming side.
    """
    into = normal.scaled(-1.0)
    tangent = direction - into.scaled(direction.dot(into))
    tn = tangent.norm()
    if tn == 0.0:
        return direction
    tangent = tangent.scaled(1.0 / tn)
    return Vec3.unit(*(into.scaled(math.cos(angle_out)) + tangent.scaled(math.sin(angle_out))))


def trace_ray(model: RefractionModel, i: float) -> RayTrace:
    """Trace an axis-parallel ray of incidence ``i`` through the unit sphere by vector geometry."""
    if not i > 0.0:
        raise DomainError(f"incidence must be positive, got {i!r}")
    d = deviation(model, i)
    if not i - 2.0 * d > 0.0:
        raise RayGeometryError(i)
    h = math.sin(i)
    ray = Vec3(1.0, 0.0, 0.0)
    entry = Vec3(-math.sqrt(1.0 - h * h), h, 0.0)
    # entering: angle of incidence from the outward normal at the entry point
    n_in = entry
    inc = math.acos(min(1.0, -ray.dot(n_in)))
    inside = _refract(ray, n_in, model.refraction(inc))
    # second intersection of entry + t*inside with the unit sphere
    t = -2.0 * entry.dot(inside)
    exit_pt = entry + inside.scaled(t)
    exit_pt = Vec3.unit(*exit_pt)
    # leaving: the internal ray meets the surface at angle r; it leaves at model.incidence(r)
    n_out = exit_pt.scaled(-1.0)
    inc2 = math.acos(min(1.0, inside.dot(exit_pt)))
    out = _refract(inside, n_out, model.incidence(inc2))
    if not out.y < 0.0:
        raise RayGeometryError(i, "exit ray does not descend toward the axis")
    crossing = exit_pt.x - exit_pt.y * out.x / out.y
    e = i - 2.0 * d
    exit_res = math.hypot(exit_pt.x - math.cos(e), exit_pt.y - math.sin(e))
    cross_res = abs(crossing - closed_form_crossing(i, d))
    return RayTrace(i, d, entry, exit_pt, out, crossing, exit_res, cross_res)


def crossing(model: RefractionModel, i: float) -> float:
    return trace_ray(model, i).crossing_x


def paraxial_crossing(n: float) -> float:
    return n / (2.0 * (n - 1.0))


def laws_check(model: RefractionModel, grid: Sequence[float]) -> ProofTranscript:
    """Check the refraction laws on ``grid``: r and d increase, i/d decreases, 0 < i - 2d < 2d.

    For a Snell model, positivity of i - 2d is checked against the closed-form
    limit 2 arccos(n/2); for a table, over the grid. Below a table's first row
    the interpolation runs straight from (0, 0), so i/d is constant there;
    table grids are clipped to start at the first row.
    """
    grid = [float(i) for i in grid]
    if isinstance(model, TableModel):
        grid = [i for i in grid if i >= model.rows[0][0] * (1 - 1e-15)]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    if any(i <= 0.0 for i in grid):
        raise DomainError("grid must be positive")
    r = np.array([model.refraction(i) for i in grid])
    ii = np.array(grid)
    d = ii - r
    t = ProofTranscript(f"refraction laws on {len(grid)} incidences ({model})")

    def min_step(values):
        return float(np.diff(values).min()) if len(values) > 1 else math.inf

    t.add("r increasing: 0 < min step of r", 0.0, "<", min_step(r))
    t.add("d increasing: 0 < min step of d", 0.0, "<", min_step(d))
    t.add("i/d decreasing: 0 < min step of d/i", 0.0, "<", min_step(d / ii))
    t.add("i - 2d < 2d: max (i - 4d) < 0", float((ii - 4 * d).max()), "<", 0.0)
    if isinstance(model, SnellModel):
        limit = model.validity_limit()
        mismatches = int(np.sum((ii - 2 * d > 0) != (ii < limit)))
        t.add(f"i - 2d > 0 iff i < {math.degrees(limit):.4f} deg: mismatches", mismatches, "=", 0.0)
    else:
        t.add("0 < min (i - 2d)", 0.0, "<", float((ii - 2 * d).min()))
    return t


def no_convergence_check(model: RefractionModel, grid: Sequence[float]) -> tuple[float, float] | None:
    """First pair of grid incidences whose crossings are not strictly decreasing, or None."""
    xs = [crossing(model, i) for i in grid]
    for k in range(len(xs) - 1):
        if not xs[k + 1] < xs[k]:
            return float(grid[k]), float(grid[k + 1])
    return None


def prop3_transcript(i1: float, i2: float, model: RefractionModel) -> ProofTranscript:
    """Reductio that two parallel rays i1 < i2 cannot meet the axis at one point.

    The argument needs the exit angle i - 2d to grow from i1 to i2. It peaks
    inside the validity domain (near 49.8 deg for n = 1.5), so for pairs that
    straddle the peak the mediant hypotheses fail and that step is recorded
    as failing.
    """
    if not i1 < i2:
        raise DomainError(f"need i1 < i2, got {i1!r}, {i2!r}")
    d1, d2 = deviation(model, i1), deviation(model, i2)
    if not d2 > d1:
        raise DomainError(f"need d2 > d1, got d1={d1!r}, d2={d2!r}")
    for i in (i1, i2):
        if not excess(model, i) > 0.0:
            raise RayGeometryError(i)
    a, b, c, d = i2 - 2 * d2, 2 * d2, i1 - 2 * d1, 2 * d1
    t = ProofTranscript(f"no common crossing for i1={math.degrees(i1):.6g} deg, i2={math.degrees(i2):.6g} deg")
    t.add("(i2-2d2)/(2d2) < (i1-2d1)/(2d1)", a / b, "<", c / d)
    try:
        mediant_check(a, b, c, d)
        t.add("mediant: (2d2+2d1)/(2d2-2d1) < (a+c)/(a-c)", (b + d) / (b - d), "<", (a + c) / (a - c))
    except MediantPreconditionError:
        t.add("mediant hypotheses a > c > 0, b > d > 0", c, "<", a)
    t.add(
        "sin(2d2+2d1)/sin(2d2-2d1) < sin(a+c)/sin(a-c)",
        math.sin(b + d) / math.sin(b - d),
        "<",
        math.sin(a + c) / math.sin(a - c),
    )
    return t


@dataclass(frozen=True)
class BeamReport:
    area_hi: float
    area_lo: float
    crossings_hi: Interval
    crossings_lo: Interval
    n_point: float
    n_prime_point: float
    focus_verdict: str
    concentrated: bool


def beam_report(model: RefractionModel, samples: int = 400) -> BeamReport:
    """Compare the beams i >= 50 deg and i <= 40 deg: areas and where they cross the axis."""
    i50, i40 = math.radians(50.0), math.radians(40.0)
    cap = min(model.validity_limit(), model.max_incidence)
    hi_grid = np.linspace(i50, cap, samples + 1)[:-1]
    lo_grid = np.linspace(0.0, i40, samples + 1)[1:]
    x_hi = [crossing(model, float(i)) for i in hi_grid]
    x_lo = [crossing(model, float(i)) for i in lo_grid]
    area_hi = math.pi * (math.sin(cap) ** 2 - math.sin(i50) ** 2)
    area_lo = math.pi * math.sin(i40) ** 2
    n_pt, n_prime = crossing(model, i40), crossing(model, i50)
    c_hi, c_lo = Interval(min(x_hi), max(x_hi)), Interval(min(x_lo), max(x_lo))
    ok = c_lo.issubset(Interval(n_pt, S_POINT)) and c_hi.issubset(Interval(POLE, n_prime)) and n_prime < S_POINT
    verdict = (
        f"i <= 40 deg crosses in [{c_lo.lo:.5f}, {c_lo.hi:.5f}] within [N, S] = [{n_pt:.5f}, {S_POINT}]; "
        f"i >= 50 deg crosses in [{c_hi.lo:.5f}, {c_hi.hi:.5f}] within [C, N'] = [{POLE}, {n_prime:.5f}]; "
        + (
            "the burning region lies between the pole and S, within a quarter diameter of the sphere"
            if ok
            else "concentration claim not reproduced"
        )
    )
    return BeamReport(area_hi, area_lo, c_hi, c_lo, n_pt, n_prime, verdict, ok)


def sweep_csv(model: RefractionModel, grid: Sequence[float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RAY_CSV_HEADER)
    for i in grid:
        tr = trace_ray(model, float(i))
        w.writerow([fmt(math.degrees(tr.i)), fmt(math.degrees(tr.d)), fmt(tr.crossing_x)])
    return buf.getvalue()


def rays_svg(model: RefractionModel, incidences: Sequence[float], width: int = 800) -> str:
    canvas = Canvas(-2.2, 2.3, -1.1, 1.2, width=width)
    canvas.circle((0.0, 0.0), 1.0)
    canvas.line((-2.2, 0.0), (2.3, 0.0), stroke="grey")
    for name, x in (("C", POLE), ("S", S_POINT), ("V", V_POINT)):
        canvas.dot((x, 0.0), name)
    for i in incidences:
        tr = trace_ray(model, float(i))
        canvas.line((-2.2, tr.entry.y), (tr.entry.x, tr.entry.y), stroke="goldenrod")
        canvas.line((tr.entry.x, tr.entry.y), (tr.exit.x, tr.exit.y), stroke="steelblue")
        canvas.line((tr.exit.x, tr.exit.y), (tr.crossing_x, 0.0), stroke="firebrick")
    return canvas.render(f"double refraction by a sphere ({model})")
