"""Exact-geometry primitives shared by every application module.

Angles are plain floats in radians. Functions that need an angle inside a
particular range check it and raise :class:`DomainError`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

UNIT_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class DegenerateError(ValueError):
    """A geometric construction has no unique answer (parallel lines, collinear points)."""


class NoShadowError(DomainError):
    """The sun is on or below the horizon, so the gnomon casts no finite shadow."""


class MediantPreconditionError(DomainError):
    """The hypotheses a/b < c/d, a > c > 0, b > d > 0 do not hold."""


def require_open(value: float, lo: float, hi: float, name: str) -> float:
    if not (math.isfinite(value) and lo < value < hi):
        raise DomainError(f"{name}={value!r} outside ({lo!r}, {hi!r})")
    return value


def require_half_open(value: float, lo: float, hi: float, name: str) -> float:
    if not (math.isfinite(value) and lo < value <= hi):
        raise DomainError(f"{name}={value!r} outside ({lo!r}, {hi!r}]")
    return value


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


class Point2(NamedTuple):
    x: float
    y: float

    def __sub__(self, other):
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other):
        return Point2(self.x + other.x, self.y + other.y)

    def scaled(self, k: float) -> "Point2":
        return Point2(k * self.x, k * self.y)

    def dot(self, other) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def unit(cls, x: float, y: float, z: float) -> "Vec3":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0 or not math.isfinite(n):
            raise DegenerateError("cannot normalise a zero or non-finite vector")
        return cls(x / n, y / n, z / n)

    def __add__(self, other):
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, k: float) -> "Vec3":
        return Vec3(k * self.x, k * self.y, k * self.z)

    def dot(self, other) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other) -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def is_unit(self) -> bool:
        return abs(self.norm() - 1.0) <= UNIT_TOL


def chord_of_arc(theta: float) -> float:
    """Chord subtending ``theta`` in the unit circle: crd(theta) = 2 sin(theta/2)."""
    require_open(theta, 0.0, 2 * math.pi, "theta")
    return 2.0 * math.sin(theta / 2.0)


def ptolemy_check(alpha: float, beta: float) -> bool:
    """Limit case of the lemma: sin(beta)/sin(alpha) <= beta/alpha for 0 < alpha < beta <= pi/2."""
    require_half_open(beta, 0.0, math.pi / 2, "beta")
    if not 0.0 < alpha < beta:
        raise DomainError(f"need 0 < alpha < beta, got alpha={alpha!r}, beta={beta!r}")
    return math.sin(beta) / math.sin(alpha) <= beta / alpha


def mediant_check(a: float, b: float, c: float, d: float) -> bool:
    """Return whether (b+d)/(b-d) < (a+c)/(a-c) given a/b < c/d, a > c > 0, b > d > 0.

    A violated hypothesis raises :class:`MediantPreconditionError`, so a caller
    can tell a bad input from a failed inequality.
    """
    if not (a > c > 0.0 and b > d > 0.0):
        raise MediantPreconditionError(
            f"need a > c > 0 and b > d > 0, got a={a!r}, b={b!r}, c={c!r}, d={d!r}"
        )
    if not a * d < c * b:
        raise MediantPreconditionError(f"need a/b < c/d, got {a}/{b} >= {c}/{d}")
    return (b + d) / (b - d) < (a + c) / (a - c)


def central_projection(v: Vec3, g: float = 1.0) -> Point2:
    """Shadow of the gnomon tip on the horizontal dial for sun direction ``v``.

    ``v`` is expressed in the horizon frame (east, north, up). The gnomon of
    length ``g`` stands vertically with its tip at the origin; the shadow of
    the tip is where the line through the tip along ``-v`` meets the plane
    ``up = -g``. The result is (east, north) on that plane.
    """
    if g <= 0.0:
        raise DomainError(f"gnomon length must be positive, got {g!r}")
    if not v.z > 0.0:
        raise NoShadowError(f"no finite shadow: sun direction {tuple(v)} is not above the horizon")
    k = g / v.z
    return Point2(-v.x * k, -v.y * k)


def _conic_rows(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    return np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])


def conic_fit_residual(points: Sequence[Sequence[float]]) -> float:
    """Fit a conic through five of ``points`` and measure how far the rest lie from it.

    Points are sorted lexicographically (so the result does not depend on the
    input order), translated to their centroid and scaled to RMS radius
    sqrt(2). Five evenly spread points define the conic as the null vector of
    their 5x6 design matrix. Each remaining point contributes its Sampson
    distance |F(p)| / |grad F(p)|, a first-order geometric distance in the
    normalised units; the maximum is returned.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 6:
        raise DomainError("conic_fit_residual needs at least 6 two-dimensional points")
    if not np.all(np.isfinite(pts)):
        raise DomainError("non-finite point")
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    centre = pts.mean(axis=0)
    rms = math.sqrt(float(((pts - centre) ** 2).sum(axis=1).mean()))
    if rms == 0.0:
        raise DegenerateError("all points coincide")
    q = (pts - centre) * (math.sqrt(2.0) / rms)

    fit_idx = np.unique(np.round(np.linspace(0, len(q) - 1, 5)).astype(int))
    rest = np.setdiff1d(np.arange(len(q)), fit_idx)
    _, sv, vt = np.linalg.svd(_conic_rows(q[fit_idx]))
    if len(sv) < 5 or sv[4] <= 1e-12 * sv[0]:
        raise DegenerateError("fitting points do not determine a unique conic")
    a, b, c, d, e, f = vt[-1]

    x, y = q[rest, 0], q[rest, 1]
    value = _conic_rows(q[rest]) @ vt[-1]
    grad = np.hypot(2 * a * x + b * y + d, b * x + 2 * c * y + e)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.where(grad > 0, np.abs(value) / grad, np.where(value == 0, 0.0, np.inf))
    return float(dist.max())
