"""Proof transcripts: ordered, individually replayable inequality and identity steps."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable

RELATIONS = ("<", "<=", "=")
CSV_HEADER = ("step", "lhs", "rhs", "relation", "residual", "pass")

EQ_RTOL = 1e-10


def fmt(value: float) -> str:
    """Deterministic text form of a float (round-trips exactly)."""
    return repr(float(value))


@dataclass(frozen=True)
class Step:
    """One checked claim ``lhs relation rhs``.

    For inequalities ``residual`` is the signed margin ``rhs - lhs`` (positive
    when the claim holds). For ``=`` it is ``|lhs - rhs|`` and the step passes
    when that is within ``tol`` (relative to the larger magnitude, floored at 1).
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    residual: float
    passed: bool

    @classmethod
    def check(cls, name: str, lhs: float, relation: str, rhs: float, tol: float = EQ_RTOL) -> "Step":
        lhs, rhs = float(lhs), float(rhs)
        if relation == "<":
            residual, ok = rhs - lhs, lhs < rhs
        elif relation == "<=":
            residual, ok = rhs - lhs, lhs <= rhs
        elif relation == "=":
            residual = abs(lhs - rhs)
            ok = residual <= tol * max(1.0, abs(lhs), abs(rhs))
        else:
            raise ValueError(f"unknown relation {relation!r}")
        if math.isnan(lhs) or math.isnan(rhs):
            ok = False
        return cls(name, lhs, rhs, relation, residual, bool(ok))

    def replay(self, tol: float = EQ_RTOL) -> bool:
        return Step.check(self.name, self.lhs, self.relation, self.rhs, tol).passed


@dataclass
class ProofTranscript:
    title: str
    steps: list[Step] = field(default_factory=list)

    def add(self, name: str, lhs: float, relation: str, rhs: float, tol: float = EQ_RTOL) -> Step:
        step = Step.check(name, lhs, relation, rhs, tol)
        self.steps.append(step)
        return step

    def extend(self, steps: Iterable[Step]) -> None:
        self.steps.extend(steps)

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.steps)

    def failures(self) -> list[Step]:
        return [s for s in self.steps if not s.passed]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for s in self.steps:
            w.writerow([s.name, fmt(s.lhs), fmt(s.rhs), s.relation, fmt(s.residual), "true" if s.passed else "false"])
        return buf.getvalue()

    def report(self) -> str:
        lines = [self.title]
        width = max((len(s.name) for s in self.steps), default=0)
        for k, s in enumerate(self.steps, 1):
            mark = "ok  " if s.passed else "FAIL"
            lines.append(
                f"  {k:2d}. [{mark}] {s.name:<{width}}  {s.lhs:.10g} {s.relation} {s.rhs:.10g}"
                f"  (residual {s.residual:.3e})"
            )
        lines.append(f"  overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


def read_csv(text: str) -> list[Step]:
    """Parse a transcript CSV back into steps (used to replay saved artifacts)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError("not a transcript CSV")
    return [
        Step(name, float(lhs), float(rhs), rel, float(res), flag == "true")
        for name, lhs, rhs, rel, res, flag in rows[1:]
    ]
