"""Trajectories of the Sun, Moon and fixed stars in the observer's frame.

Coordinates are declination and east-positive hour angle (standing in for
"required time", of which only increments matter). A body moves uniformly
along the ecliptic (zero latitude) while the sky turns westward at the
sidereal rate; sidereal time is zero at t = 0.

The central result here is that a body moving south culminates strictly
before crossing the meridian (``prop28_report``).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .geometry import DomainError
from .transcript import fmt

SIDEREAL_RATE = 360.9856  # deg/day
SUN_RATE = 0.9856
MOON_RATE = 13.176
OBLIQUITY = math.radians(23.44)
SYNODIC_MONTH = 29.530589
TRAJECTORY_CSV_HEADER = ("t_days", "delta_deg", "H_deg", "alt_deg")

GOLDEN_TOL = 1e-9  # days
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BodyModel:
    name: str
    rate: float  # ecliptic longitude, deg/day
    lambda0: float = 0.0  # rad at t = 0
    obliquity: float = OBLIQUITY
    diurnal_rate: float = SIDEREAL_RATE

    def __post_init__(self):
        if self.rate < 0.0:
            raise DomainError("ecliptic rate must be non-negative")

    @classmethod
    def sun(cls, lambda0: float = 0.0) -> "BodyModel":
        return cls("sun", SUN_RATE, lambda0)

    @classmethod
    def moon(cls, lambda0: float = 0.0) -> "BodyModel":
        return cls("moon", MOON_RATE, lambda0)

    @classmethod
    def fixed_star(cls, lambda0: float = 0.0) -> "BodyModel":
        return cls("star", 0.0, lambda0)

    def check_dominance(self):
        if not self.diurnal_rate > self.rate:
            raise DomainError(
                f"diurnal rate {self.diurnal_rate} deg/day does not dominate the proper motion {self.rate} deg/day"
            )

    def longitude(self, t):
        return self.lambda0 + np.radians(self.rate) * t


def equatorial_of_ecliptic(lam, eps: float):
    """(right ascension, declination) of the ecliptic point at longitude ``lam``.

    Right ascension is returned continuous in ``lam`` (same winding), not wrapped.
    """
    lam = np.asarray(lam, dtype=float)
    dec = np.arcsin(np.sin(eps) * np.sin(lam))
    ra = np.arctan2(np.cos(eps) * np.sin(lam), np.cos(lam))
    ra = lam + (ra - lam + np.pi) % (2 * np.pi) - np.pi
    if ra.ndim == 0:
        return float(ra), float(dec)
    return ra, dec


def ecliptic_of_equatorial(ra, dec, eps: float):
    """Inverse transform for zero ecliptic latitude; returns (longitude, latitude)."""
    sb = np.sin(dec) * np.cos(eps) - np.cos(dec) * np.sin(eps) * np.sin(ra)
    lam = np.arctan2(np.sin(ra) * np.cos(eps) + np.tan(dec) * np.sin(eps), np.cos(ra))
    return lam, np.arcsin(sb)


def altitude(phi: float, delta, hour_angle):
    """arcsin(sin phi sin delta + cos phi cos delta cos H)."""
    if not abs(phi) < math.pi / 2:
        raise DomainError(f"latitude {phi!r} must satisfy |phi| < pi/2")
    s = np.sin(phi) * np.sin(delta) + np.cos(phi) * np.cos(delta) * np.cos(hour_angle)
    out = np.arcsin(np.clip(s, -1.0, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def azimuth_east_of_north(phi: float, delta, hour_angle):
    """Azimuth measured from north through east for east-positive hour angle."""
    e = np.cos(delta) * np.sin(hour_angle)
    n = np.cos(phi) * np.sin(delta) - np.sin(phi) * np.cos(delta) * np.cos(hour_angle)
    return np.arctan2(e, n) % (2 * np.pi)


def state(model: BodyModel, phi: float, t):
    """(declination, hour angle, altitude) at time(s) ``t`` in days."""
    ra, dec = equatorial_of_ecliptic(model.longitude(t), model.obliquity)
    h = ra - np.radians(model.diurnal_rate) * np.asarray(t, dtype=float)
    if np.ndim(h) == 0:
        h = float(h)
    return dec, h, altitude(phi, dec, h)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    delta: float
    H: float
    a: float


def trajectory(model: BodyModel, phi: float, t0: float, t1: float, n: int) -> list[TrajectorySample]:
    """``n`` samples on a uniform time grid over [t0, t1]."""
    if n < 2 or not t1 > t0:
        raise DomainError("need n >= 2 and t1 > t0")
    model.check_dominance()
    ts = np.linspace(t0, t1, n)
    dec, h, alt = state(model, phi, ts)
    if np.any(np.diff(h) >= 0.0):
        raise DomainError("hour angle is not strictly decreasing (westward progress violated)")
    # only increments matter; shift by whole turns so the first sample lies in (-pi, pi]
    h = h - 2 * np.pi * np.round(h[0] / (2 * np.pi))
    return [TrajectorySample(float(a), float(b), float(c), float(d)) for a, b, c, d in zip(ts, dec, h, alt)]


def trajectory_csv(samples: Sequence[TrajectorySample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_CSV_HEADER)
    for s in samples:
        w.writerow([fmt(s.t), fmt(math.degrees(s.delta)), fmt(math.degrees(s.H)), fmt(math.degrees(s.a))])
    return buf.getvalue()


class ExtremumInWindowError(DomainError):
    def __init__(self, index: int, t: float):
        self.index, self.t = index, t
        super().__init__(f"declination extremum (or stationary body) in window at sample {index}, t = {t!r}")


def increment_ratio_bound(traj: Sequence[TrajectorySample], window: tuple[float, float] | None = None) -> float:
    """Lower bound m of |delta increment| / |hour-angle increment| over consecutive samples.

    Both increments are central angles. The window must avoid the northern
    and southern turning points of the trajectory, where the ratio vanishes.
    """
    pts = [s for s in traj if window is None or window[0] <= s.t <= window[1]]
    if len(pts) < 2:
        raise DomainError("window holds fewer than two samples")
    dd = np.diff([s.delta for s in pts])
    dh = np.diff([s.H for s in pts])
    for k in range(len(dd)):
        if dd[k] == 0.0 or (k and np.sign(dd[k]) != np.sign(dd[k - 1])):
            raise ExtremumInWindowError(k, pts[k].t)
    return float(np.min(np.abs(dd) / np.abs(dh)))


def golden_section_max(f, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Abscissa of the maximum of a unimodal ``f`` on [a, b], to within ``tol``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def find_transit(model: BodyModel, phi: float, day: float) -> float:
    """First upper meridian transit (H = 0 mod 2 pi) at or after ``day``."""
    ts = np.linspace(day, day + 1.2, 241)
    _, h, _ = state(model, phi, ts)
    s = np.sin(h)
    for k in range(len(ts) - 1):
        if s[k] > 0.0 >= s[k + 1] and math.cos(h[k]) > 0.0:
            return brentq(lambda t: math.sin(state(model, phi, t)[1]), ts[k], ts[k + 1], xtol=1e-14, rtol=1e-15)
    raise DomainError(f"no upper transit within 1.2 days of day {day}")


@dataclass(frozen=True)
class Prop28Report:
    t_transit: float
    t_max: float
    a_transit: float
    a_max: float
    ID_arc: float
    H_offset: float
    m: float
    southward: bool
    flag: str

    def text(self) -> str:
        return "\n".join(
            [
                f"transit        t = {self.t_transit:.9f} d   altitude {math.degrees(self.a_transit):.9f} deg",
                f"maximum        t = {self.t_max:.9f} d   altitude {math.degrees(self.a_max):.9f} deg",
                f"lead           {(self.t_transit - self.t_max) * 86400.0:.4f} s, hour angle {math.degrees(self.H_offset) * 3600:.4f} arcsec east",
                f"ID arc         {math.degrees(self.ID_arc) * 60:.6f} arcmin",
                f"ratio bound m  {self.m:.6g}",
                f"verdict        {self.flag}",
            ]
        )


def prop28_report(model: BodyModel, phi: float, day: float, half_window: float = 0.05) -> Prop28Report:
    """Locate the meridian transit and the altitude maximum on ``day`` and compare them."""
    model.check_dominance()
    tt = find_transit(model, phi, day)
    dec_t, _, a_t = state(model, phi, tt)
    alt = lambda t: state(model, phi, t)[2]  # noqa: E731
    tm = golden_section_max(alt, tt - half_window, tt + half_window)
    dec_m, h_m, a_m = state(model, phi, tm)
    h_m = math.remainder(h_m, 2 * math.pi)
    ddec = state(model, phi, tt + 1e-3)[0] - state(model, phi, tt - 1e-3)[0]
    southward = ddec <= 0.0
    if model.rate > 0.0:
        traj = trajectory(model, phi, tt - half_window, tt, 101)
        try:
            m = increment_ratio_bound(traj)
        except ExtremumInWindowError:
            m = 0.0
    else:
        m = 0.0
    if not southward:
        flag = "northward arc: maximum after transit expected on west side"
    elif tm < tt:
        flag = "maximum strictly before transit"
    else:
        flag = "maximum not before transit"
    return Prop28Report(tt, tm, a_t, max(a_m, a_t), dec_m - dec_t, h_m, m, southward, flag)


@dataclass(frozen=True)
class Construction:
    Delta: float
    H_H: float
    delta_I: float
    trials: int


def construct_I(phi: float, delta_D: float, a_D: float, m: float, *, start: float = math.radians(1.0), resolution: float = 1e-12) -> Construction:
    """Find Delta > 0 and H_H with Delta / H_H < m.

    I lies on the meridian at declination delta_D + Delta; H_H is the hour
    angle at which the parallel of I meets the almucantar of D. Delta is
    halved from ``start`` until the ratio drops below ``m``. H_H comes from the
    haversine form of the altitude law, which keeps its precision when Delta
    (and so H_H) is tiny.
    """
    if not m > 0.0:
        raise DomainError(f"need m > 0, got {m!r}")
    if math.isclose(a_D, math.pi / 2, abs_tol=1e-12):
        raise DomainError("D is at the zenith")
    if not delta_D < phi:
        raise DomainError("D culminates on or north of the zenith: a parallel north of D passes lower, not higher")
    zd = math.pi / 2 - a_D
    delta, trials = start, 0
    while delta >= resolution:
        trials += 1
        d_i = delta_D + delta
        # hav H = (cos(phi - d_i) - cos zd) / (2 cos phi cos d_i)
        hav = math.sin((zd + phi - d_i) / 2) * math.sin((zd - phi + d_i) / 2) / (math.cos(phi) * math.cos(d_i))
        if 0.0 < hav <= 1.0:
            h = 2.0 * math.asin(math.sqrt(hav))
            if delta / h < m:
                return Construction(delta, h, d_i, trials)
        delta *= 0.5
    raise DomainError(f"no construction above resolution {resolution} rad for m = {m!r}")


@dataclass(frozen=True)
class ConstructionReplay:
    t_M: float
    H_M: float
    a_M: float
    a_D: float
    inside: bool  # H_M < H_H
    higher: bool  # a_M > a_D


def replay_construction(model: BodyModel, phi: float, t_transit: float, con: Construction) -> ConstructionReplay:
    """Find where the trajectory crosses the parallel of I before transit and compare with H."""
    dec_d, _, a_d = state(model, phi, t_transit)
    g = lambda t: state(model, phi, t)[0] - con.delta_I  # noqa: E731
    lo = t_transit
    step = 1e-4
    while g(lo) < 0.0:
        lo -= step
        step *= 2
        if t_transit - lo > 5.0:
            raise DomainError("trajectory never reaches the parallel of I")
    t_m = brentq(g, lo, t_transit, xtol=1e-15, rtol=1e-15)
    _, h_m, a_m = state(model, phi, t_m)
    h_m = math.remainder(h_m, 2 * math.pi)
    return ConstructionReplay(t_m, h_m, a_m, a_d, h_m < con.H_H, a_m > a_d)


def moon_month_max(phi: float, lambda0: float = 0.0, step: float = 0.25) -> tuple[float, Prop28Report]:
    """Largest ID arc over one synodic month of southward Moon transits."""
    model = BodyModel.moon(lambda0)
    best = None
    for day in np.arange(0.0, SYNODIC_MONTH, step):
        rep = prop28_report(model, phi, float(day))
        if rep.southward and (best is None or rep.ID_arc > best.ID_arc):
            best = rep
    if best is None:
        raise DomainError("no southward transit found")
    return best.ID_arc, best


@dataclass(frozen=True)
class SetEvent:
    phi: float
    t: float
    H: float
    azimuth: float


def set_events(model: BodyModel, phi: float, t0: float, t1: float, dt: float = 1.0 / 1440.0) -> list[SetEvent]:
    """All settings (altitude crossing zero downward) in [t0, t1]."""
    ts = np.arange(t0, t1 + dt, dt)
    _, _, alt = state(model, phi, ts)
    idx = np.flatnonzero((alt[:-1] > 0.0) & (alt[1:] <= 0.0))
    events = []
    for k in idx:
        t = brentq(lambda s: state(model, phi, s)[2], ts[k], ts[k + 1], xtol=1e-12)
        dec, h, _ = state(model, phi, t)
        events.append(SetEvent(phi, t, math.remainder(h, 2 * math.pi), float(azimuth_east_of_north(phi, dec, h))))
    return events


def east_set_search(
    phi_range: tuple[float, float, float],
    model: BodyModel,
    t_span: tuple[float, float] = (0.0, 30.0),
    dt: float = 1.0 / 1440.0,
) -> SetEvent | None:
    """First setting on the east side of the meridian over a grid of latitudes, or None.

    ``phi_range`` is (start, stop, step) in radians, stop inclusive.
    """
    lo, hi, step = phi_range
    for phi in np.arange(lo, hi + 0.5 * step, step):
        for ev in set_events(model, float(phi), *t_span, dt=dt):
            if math.sin(ev.H) > 0.0:
                return ev
    return None
