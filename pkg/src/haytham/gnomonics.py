"""Seasonal hour lines on a horizontal sundial and how far they are from straight.

Frame conventions: the horizon frame is (east, north, up); hour angle is
measured positive east of the meridian, so the morning sun has H > 0. Dial
images are (east, north) points on the dial plane, in units of the gnomon
length unless a gnomon is given.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import DegenerateError, DomainError, Interval, Point2, Vec3, central_projection, conic_fit_residual
from .lemma import HourFraction
from .svg import Canvas
from .transcript import fmt

BARLEYCORNS_PER_FINGER = 6
RATIO_BOUND = 1.0 / 174.0
DEVIATION_BOUND = 3.0 / 5.0  # barleycorns, for a three-finger gnomon
HOUR_LINE_CSV_HEADER = ("delta_deg", "y_deg", "img_x", "img_y")


class CircumpolarError(DomainError):
    """The body never sets on this parallel."""


class NeverRisesError(DomainError):
    """The body never rises on this parallel."""


@dataclass(frozen=True)
class SundialConfig:
    latitude: float
    c: float
    obliquity: float = math.radians(23.5)
    gnomon: float = 3 * BARLEYCORNS_PER_FINGER

    def __post_init__(self):
        if not abs(self.latitude) < math.pi / 2:
            raise DomainError(f"latitude {self.latitude!r} must satisfy |phi| < pi/2")
        if not 0.0 < self.obliquity < math.pi / 2:
            raise DomainError(f"obliquity {self.obliquity!r} outside (0, pi/2)")
        if not self.gnomon > 0.0:
            raise DomainError(f"gnomon length must be positive, got {self.gnomon!r}")
        object.__setattr__(self, "c", HourFraction(self.c))


def diurnal_arc(phi: float, delta: float) -> float:
    """Arc of the daily circle above the horizon, y = 2 arccos(-tan phi tan delta)."""
    k = -math.tan(phi) * math.tan(delta)
    if k <= -1.0:
        raise CircumpolarError(f"circumpolar: tan(phi) tan(delta) = {-k:.6g} >= 1")
    if k >= 1.0:
        raise NeverRisesError(f"never rises: tan(phi) tan(delta) = {-k:.6g} <= -1")
    return 2.0 * math.acos(k)


def sq_os_ratio(y: float, c: float) -> float:
    """sin(((y - pi)/2)(1 - 2c)) / sin((y - pi)/2), equal to 1 - 2c at the equinox.

    The ratio is even in y - pi: it grows as the diurnal arc moves away from
    the equinoctial one in either direction.
    """
    c = HourFraction(c)
    if c >= 0.5:
        raise DomainError(f"c = {float(c)!r} >= 1/2; use the mirror hour 1 - c")
    if not 0.0 < y < 2 * math.pi:
        raise DomainError(f"diurnal arc {y!r} outside (0, 2 pi)")
    half = (y - math.pi) / 2
    if half == 0.0:
        return 1.0 - 2.0 * c
    return math.sin(half * (1 - 2 * c)) / math.sin(half)


def sq_os_bracket(phi: float, c: float, obliquity: float = math.radians(23.5)) -> Interval:
    """[1 - 2c, ratio at the longest day]: the range of SQ/OS over the year."""
    y_max = max(diurnal_arc(phi, obliquity), diurnal_arc(phi, -obliquity))
    return Interval(1.0 - 2.0 * float(HourFraction(c)), sq_os_ratio(y_max, c))


def sun_direction(phi: float, delta: float, hour_angle: float) -> Vec3:
    """Unit vector (east, north, up) to a body at declination ``delta`` and east-positive hour angle."""
    cd = math.cos(delta)
    return Vec3.unit(
        cd * math.sin(hour_angle),
        math.cos(phi) * math.sin(delta) - math.sin(phi) * cd * math.cos(hour_angle),
        math.sin(phi) * math.sin(delta) + math.cos(phi) * cd * math.cos(hour_angle),
    )


def seasonal_hour_angle(phi: float, delta: float, c: float) -> float:
    """Hour angle at the end of the fraction ``c`` of the daylight arc: (y/2)(1 - 2c)."""
    return 0.5 * diurnal_arc(phi, delta) * (1.0 - 2.0 * c)


@dataclass(frozen=True)
class HourSample:
    delta: float
    y: float
    image: Point2


@dataclass(frozen=True)
class Deviation:
    ratio: float
    max_abs: float  # barleycorns
    max_rel: float  # gnomon lengths


@dataclass
class HourLine:
    config: SundialConfig
    samples: list[HourSample]
    equinox_index: int
    deviation: Deviation = field(init=False)

    def __post_init__(self):
        self.deviation = line_deviation(self)

    @property
    def chord(self) -> tuple[Point2, Point2]:
        return self.samples[0].image, self.samples[-1].image

    def images(self) -> np.ndarray:
        return np.array([s.image for s in self.samples])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HOUR_LINE_CSV_HEADER)
        for s in self.samples:
            w.writerow([fmt(math.degrees(s.delta)), fmt(math.degrees(s.y)), fmt(s.image.x), fmt(s.image.y)])
        return buf.getvalue()


def hour_line(config: SundialConfig, n: int = 65) -> HourLine:
    """Sample the hour line ``config.c`` for ``n`` declinations across [-obliquity, obliquity].

    The equinox (delta = 0) is always included; it is the inflection point.
    Images are in gnomon units (multiply by ``config.gnomon`` for barleycorns).
    """
    if n < 3:
        raise DomainError("need at least 3 samples")
    eps = config.obliquity
    deltas = np.unique(np.concatenate([np.linspace(-eps, eps, n), [0.0]]))
    samples = []
    for d in deltas:
        d = float(d)
        y = diurnal_arc(config.latitude, d)
        h = 0.5 * y * (1.0 - 2.0 * config.c)
        img = central_projection(sun_direction(config.latitude, d, h))
        samples.append(HourSample(d, y, img))
    eq = int(np.flatnonzero(deltas == 0.0)[0])
    return HourLine(config, samples, eq)


def line_deviation(line: HourLine) -> Deviation:
    """How far the hour line strays from the chord joining its solstice images.

    For each sample P, with F its foot on the chord and I the equinox image,
    the ratio is |PF| / |FI| -- the tangent of the angle under which P departs
    from the chord as seen from the fixed point I. The maximum over samples is
    reported together with the largest perpendicular distance.
    """
    a, b = line.chord
    ab = b - a
    length = ab.norm()
    if length == 0.0:
        raise DegenerateError("solstice images coincide")
    u = ab.scaled(1.0 / length)
    eq = line.samples[line.equinox_index].image
    ratio, max_rel = 0.0, 0.0
    for k, s in enumerate(line.samples):
        rel = s.image - a
        dist = abs(u.cross(rel))
        foot = a + u.scaled(u.dot(rel))
        max_rel = max(max_rel, dist)
        if k != line.equinox_index:
            span = foot.dist(eq)
            if span > 0.0:
                ratio = max(ratio, dist / span)
    return Deviation(ratio, max_rel * line.config.gnomon, max_rel)


@dataclass(frozen=True)
class DeviationReport:
    ratio: float
    max_dev: float
    verdict: str
    within_bounds: bool


def deviation_report(config: SundialConfig, n: int = 65) -> DeviationReport:
    """Compare the hour line's departure from straightness with 1/174 and 3/5 barleycorn."""
    if n < 33:
        raise DomainError("deviation_report needs at least 33 samples")
    dev = hour_line(config, n).deviation
    ok_ratio = dev.ratio < RATIO_BOUND
    ok_abs = dev.max_abs < DEVIATION_BOUND
    verdict = (
        f"ratio {dev.ratio:.6f} {'<' if ok_ratio else '>='} 1/174 = {RATIO_BOUND:.6f}; "
        f"max deviation {dev.max_abs:.4f} barleycorn {'<' if ok_abs else '>='} 3/5 "
        f"(gnomon {config.gnomon:g} barleycorns): "
        + ("straight to the senses" if ok_ratio and ok_abs else "visibly curved")
    )
    return DeviationReport(dev.ratio, dev.max_abs, verdict, ok_ratio and ok_abs)


def signed_curvature(line: HourLine) -> np.ndarray:
    """Signed curvature at the interior samples (finite differences, non-uniform spacing allowed)."""
    pts = line.images()
    t = np.array([s.delta for s in line.samples])
    dx = np.gradient(pts[:, 0], t)
    dy = np.gradient(pts[:, 1], t)
    ddx = np.gradient(dx, t)
    ddy = np.gradient(dy, t)
    k = (dx * ddy - dy * ddx) / np.power(dx * dx + dy * dy, 1.5)
    return k[1:-1]


def diurnal_circle_images(phi: float, delta: float, n: int = 12, g: float = 1.0) -> list[Point2]:
    """Shadow-tip images of ``n`` points spread over the daylight part of one parallel."""
    h0 = 0.5 * diurnal_arc(phi, delta)
    return [
        central_projection(sun_direction(phi, delta, h), g)
        for h in np.linspace(-0.9 * h0, 0.9 * h0, n)
    ]


def diurnal_conic_residual(phi: float, delta: float, n: int = 6) -> float:
    return conic_fit_residual(diurnal_circle_images(phi, delta, n))


def hour_line_conic_residual(config: SundialConfig, n: int = 33) -> float:
    return conic_fit_residual(hour_line(config, n).images())


def dial_svg(phi: float, obliquity: float = math.radians(23.5), n: int = 33, width: int = 800) -> str:
    """All eleven seasonal hour lines with the two solstice curves and the equinox line."""
    lines = [hour_line(SundialConfig(phi, HourFraction.twelfths(k), obliquity), n) for k in range(1, 12)]
    curves = [diurnal_circle_images(phi, d, 61) for d in (-obliquity, 0.0, obliquity)]
    pts = np.vstack([ln.images() for ln in lines] + [np.array(cv) for cv in curves])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = 0.05 * float(max(hi - lo))
    canvas = Canvas(lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad, width=width)
    for cv in curves:
        canvas.polyline(cv, stroke="darkorange")
    for k, ln in enumerate(lines, 1):
        canvas.polyline(ln.images(), stroke="black")
        canvas.text(ln.samples[-1].image, str(k), size=10)
    canvas.dot((0.0, 0.0), "gnomon")
    return canvas.render(f"horizontal sundial, latitude {math.degrees(phi):.4g} deg")
