"""The monotonicity lemma for f(x) = sin x / sin(cx) and its machine-checked proofs.

Two proofs are replayed step by step:

* the global one, which rewrites the claim through an auxiliary angle ``z``
  with sin y / sin(cy) = sin x / sin z and a sine identity, then brackets
  with the Ptolemy limit case (``global_transcript``);
* the local one, whose neighbourhoods are chained into a finite cover of
  [x, y] (``chain_certificate``; the neighbourhoods come from
  :func:`haytham.euclid.local_eta`).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .geometry import DomainError, Interval, require_half_open, require_open
from .transcript import ProofTranscript

log = logging.getLogger(__name__)

HALF_PI = math.pi / 2
CONCLUSION_TOL = 1e-9
MAX_CHAIN_STEPS = 10**6


class HourFraction(float):
    """Fraction ``c`` of the daylight arc, 0 < c < 1 (k/12 for the end of the k-th seasonal hour)."""

    def __new__(cls, value):
        if isinstance(value, str):
            value = Fraction(value.strip())
        c = float(value)
        if not 0.0 < c < 1.0:
            raise DomainError(f"hour fraction must lie in (0, 1), got {value!r}")
        return super().__new__(cls, c)

    @classmethod
    def twelfths(cls, k: int) -> "HourFraction":
        if not (isinstance(k, int) and 0 < k < 12):
            raise DomainError(f"k must be an integer in 1..11, got {k!r}")
        return cls(Fraction(k, 12))

    def __repr__(self):
        return f"HourFraction({float(self)!r})"


def f_ratio(x: float, c: float) -> float:
    """sin x / sin(cx) for 0 < x <= pi/2."""
    c = HourFraction(c)
    require_half_open(x, 0.0, HALF_PI, "x")
    return math.sin(x) / math.sin(c * x)


def monotonicity_scan(c: float, grid: Sequence[float]) -> tuple[float, float] | None:
    """First adjacent pair (x1, x2) of ``grid`` with f(x1) <= f(x2), or None."""
    c = HourFraction(c)
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0:
        return None
    if np.any(np.diff(xs) <= 0):
        raise DomainError("grid must be strictly increasing")
    if xs[0] <= 0.0 or xs[-1] > HALF_PI:
        raise DomainError("grid must lie in (0, pi/2]")
    vals = np.sin(xs) / np.sin(c * xs)
    bad = np.flatnonzero(vals[:-1] <= vals[1:])
    if bad.size:
        k = int(bad[0])
        return float(xs[k]), float(xs[k + 1])
    return None


def lemma1_bracket(alpha: float, beta: float) -> Interval:
    """Bracket [sin b / sin a, (sin v + sin u)/(sin v - sin u)] containing beta/alpha.

    Here v = (alpha + beta)/2 and u = (beta - alpha)/2, the positive half-gap.
    """
    if not 0.0 < alpha < beta < HALF_PI:
        raise DomainError(f"need 0 < alpha < beta < pi/2, got {alpha!r}, {beta!r}")
    v = (alpha + beta) / 2
    u = (beta - alpha) / 2
    sv, su = math.sin(v), math.sin(u)
    return Interval(math.sin(beta) / math.sin(alpha), (sv + su) / (sv - su))


def lemma2_check(x: float) -> float:
    """|f(x, 1/2) - 2 cos(x/2)|."""
    require_half_open(x, 0.0, HALF_PI, "x")
    return abs(math.sin(x) / math.sin(x / 2) - 2.0 * math.cos(x / 2))


def dyadic_step_check(y: float, c: float) -> ProofTranscript:
    """Check sin(y/2)/sin(cy/2) > sin y / sin(cy), the halving step of the cover argument."""
    c = HourFraction(c)
    require_half_open(y, 0.0, HALF_PI, "y")
    t = ProofTranscript(f"dyadic step y={y!r} c={float(c)!r}")
    t.add("f(y) < f(y/2)", math.sin(y) / math.sin(c * y), "<", math.sin(y / 2) / math.sin(c * y / 2))
    return t


class IdentityResiduals(NamedTuple):
    premise_residual: float
    conclusion_residual: float


class SingularIdentityError(DomainError):
    pass


def trig_identity_residual(p: float, q: float, a: float, b: float, *, eps: float = 1e-14) -> IdentityResiduals:
    """Residuals of the premise and conclusion of the sine identity.

    Premise:    sin(a+q)/sin(b-q) = sin(a-p)/sin(b-p)
    Conclusion: sin(p+q)/sin(p-q) = 1 - sin(b-a) sin(p+pi/2) / (sin(b-p) sin(a+pi/2))
    """
    dens = {
        "sin(b-q)": math.sin(b - q),
        "sin(b-p)": math.sin(b - p),
        "sin(p-q)": math.sin(p - q),
        "sin(a+pi/2)": math.sin(a + HALF_PI),
    }
    for name, val in dens.items():
        if abs(val) < eps:
            raise SingularIdentityError(f"singular: {name} = {val!r}")
    premise = abs(math.sin(a + q) / dens["sin(b-q)"] - math.sin(a - p) / dens["sin(b-p)"])
    rhs = 1.0 - math.sin(b - a) * math.sin(p + HALF_PI) / (dens["sin(b-p)"] * dens["sin(a+pi/2)"])
    conclusion = abs(math.sin(p + q) / dens["sin(p-q)"] - rhs)
    return IdentityResiduals(premise, conclusion)


def auxiliary_angle(x: float, y: float, c: float) -> float:
    """z in (0, pi/2) with sin y / sin(cy) = sin x / sin z."""
    arg = math.sin(x) * math.sin(c * y) / math.sin(y)
    assert 0.0 < arg < 1.0, arg
    return math.asin(arg)


def global_substitution(x: float, y: float, c: float, z: float) -> tuple[float, float, float, float]:
    """(p, q, a, b) that turn the sine identity into the key equality of the global proof."""
    w = (1 - c) * y
    p = 0.5 * (w + x - z)
    q = 0.5 * (-w + x - z)
    a = 0.5 * (w + x + z)
    b = c * y + 0.5 * (w + x - z)
    return p, q, a, b


def global_transcript(x: float, y: float, c: float) -> ProofTranscript:
    """Replay the global proof that f(x) > f(y) for 0 < x < y < pi/2 as six checked steps."""
    c = HourFraction(c)
    if not 0.0 < x < y < HALF_PI:
        raise DomainError(f"need 0 < x < y < pi/2, got x={x!r}, y={y!r}")
    cy = c * y
    w = (1 - c) * y
    z = auxiliary_angle(x, y, c)
    t = ProofTranscript(f"global proof x={x!r} y={y!r} c={float(c)!r} (z={z!r})")
    t.add("z < min(x, cy)", z, "<", min(x, cy))
    t.add("x - z < (1-c)y", x - z, "<", w)
    t.add("Ptolemy on x-z < (1-c)y", (x - z) / w, "<", math.sin(x - z) / math.sin(w))
    t.add("sine identity bound", math.sin(x - z) / math.sin(w), "<", 1.0 - math.sin(cy - z) / math.sin(cy))
    t.add("Ptolemy on cy-z < cy", 1.0 - math.sin(cy - z) / math.sin(cy), "<", z / cy)
    t.add("conclusion z > cx", c * x, "<", z)
    return t


@dataclass(frozen=True)
class ChainCertificate:
    """Points y = y0 > y1 > ... > yn = x with f(y_{k+1}) > f(y_k) checked at every link."""

    c: float
    points: tuple[float, ...]
    values: tuple[float, ...]
    etas: tuple[float, ...]

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    def verify(self) -> bool:
        pts, vals = self.points, self.values
        return all(pts[k + 1] < pts[k] and vals[k + 1] > vals[k] for k in range(len(pts) - 1))


class ChainError(RuntimeError):
    pass


EtaProvider = Callable[[float, float], float]


def ratio_eta(y: float, c: float, *, samples: int = 32, resolution: float = 1e-9) -> float:
    """Largest eta (by bisection) with f(x) > f(y) on ``samples`` points of (y - eta, y).

    Fallback neighbourhood provider that only consults ``f_ratio``.
    """
    c = HourFraction(c)
    fy = f_ratio(y, c)

    def ok(eta: float) -> bool:
        return all(f_ratio(y - eta * k / (samples + 1), c) > fy for k in range(1, samples + 1))

    if ok(y):
        return y
    lo, hi = 0.0, y
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo if lo > 0.0 else resolution


def chain_certificate(x: float, y: float, c: float, eta_provider: EtaProvider | None = None) -> ChainCertificate:
    """Chain local decrease neighbourhoods from ``y`` down to ``x``.

    Each link steps greedily by half the neighbourhood radius, so successive
    neighbourhoods overlap: y_{k+1} = max(x, y_k - eta_k / 2).
    """
    c = HourFraction(c)
    if not 0.0 < x < y <= HALF_PI:
        raise DomainError(f"need 0 < x < y <= pi/2, got x={x!r}, y={y!r}")
    if eta_provider is None:
        from .euclid import local_eta

        eta_provider = local_eta

    points = [y]
    values = [f_ratio(y, c)]
    etas = []
    while points[-1] > x:
        if len(etas) >= MAX_CHAIN_STEPS:
            raise ChainError(f"no cover of [{x}, {y}] within {MAX_CHAIN_STEPS} steps")
        yk = points[-1]
        eta = eta_provider(yk, c)
        if not eta > 0.0:
            raise ChainError(f"neighbourhood provider returned eta={eta!r} at y={yk!r}")
        nxt = max(x, yk - 0.5 * eta)
        val = f_ratio(nxt, c)
        if not val > values[-1]:
            raise ChainError(f"f({nxt!r}) = {val!r} does not exceed f({yk!r}) = {values[-1]!r}")
        points.append(nxt)
        values.append(val)
        etas.append(eta)
    log.debug("chain of %d links for x=%g y=%g c=%g", len(etas), x, y, c)
    return ChainCertificate(float(c), tuple(points), tuple(values), tuple(etas))
