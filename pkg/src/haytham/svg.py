"""Minimal SVG 1.1 writer for static figures (no external dependency)."""
from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape


def _n(v: float) -> str:
    return f"{v:.3f}"


class Canvas:
    """Maps model coordinates (y up) onto an SVG viewport (y down)."""

    def __init__(self, xmin: float, xmax: float, ymin: float, ymax: float, width: int = 800, margin: int = 20):
        if xmax <= xmin or ymax <= ymin:
            raise ValueError("empty drawing extent")
        self.xmin, self.ymax = xmin, ymax
        self.scale = (width - 2 * margin) / (xmax - xmin)
        self.margin = margin
        self.width = width
        self.height = int(round((ymax - ymin) * self.scale + 2 * margin))
        self.items: list[str] = []

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return (self.margin + (x - self.xmin) * self.scale, self.margin + (self.ymax - y) * self.scale)

    def line(self, p, q, stroke="black", width=1.0, dash: str | None = None):
        (x1, y1), (x2, y2) = self.xy(*p), self.xy(*q)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{_n(x1)}" y1="{_n(y1)}" x2="{_n(x2)}" y2="{_n(y2)}" stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def polyline(self, pts: Iterable[Sequence[float]], stroke="black", width=1.0):
        coords = " ".join(f"{_n(a)},{_n(b)}" for a, b in (self.xy(*p) for p in pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def circle(self, centre, radius: float, stroke="black", fill="none", width=1.0):
        cx, cy = self.xy(*centre)
        self.items.append(
            f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(radius * self.scale)}" stroke="{stroke}" fill="{fill}" stroke-width="{width}"/>'
        )

    def dot(self, p, label: str | None = None, colour="black"):
        cx, cy = self.xy(*p)
        self.items.append(f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="2.5" fill="{colour}"/>')
        if label:
            self.items.append(f'<text x="{_n(cx + 4)}" y="{_n(cy - 4)}" font-size="12" font-family="serif">{escape(label)}</text>')

    def text(self, p, label: str, size: int = 12):
        x, y = self.xy(*p)
        self.items.append(f'<text x="{_n(x)}" y="{_n(y)}" font-size="{size}" font-family="serif">{escape(label)}</text>')

    def render(self, title: str = "") -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
        )
        body = f"<title>{escape(title)}</title>\n" if title else ""
        body += "\n".join(self.items)
        return head + body + "\n</svg>\n"
