"""Minimal static SVG line plots (axes, ticks, markers, legend)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str
    color: Optional[str] = None
    dashed: bool = False


@dataclass
class Markers:
    x: Sequence[float]
    y: Sequence[float]
    label: str
    color: Optional[str] = None
    shape: str = "circle"   # circle | square | cross


@dataclass
class Figure:
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "y"
    equal_aspect: bool = False
    width: int = 640
    height: int = 480
    series: List[Series] = field(default_factory=list)
    markers: List[Markers] = field(default_factory=list)

    def line(self, x, y, label: str, color: Optional[str] = None, dashed: bool = False) -> "Figure":
        self.series.append(Series(np.asarray(x, float), np.asarray(y, float), label, color, dashed))
        return self

    def points(self, x, y, label: str, color: Optional[str] = None, shape: str = "circle") -> "Figure":
        self.markers.append(Markers(list(map(float, x)), list(map(float, y)), label, color, shape))
        return self

    def render(self) -> str:
        return _render(self)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    span = hi - lo
    if not span > 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        ticks.append(first + k * step)
        k += 1
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") if v != 0 else "0"


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.3g}"
    return f"{v:.6g}"


def _bounds(fig: Figure):
    xs = [s.x[np.isfinite(s.x)] for s in fig.series] + [np.asarray(m.x) for m in fig.markers]
    ys = [s.y[np.isfinite(s.y)] for s in fig.series] + [np.asarray(m.y) for m in fig.markers]
    xs = np.concatenate([a for a in xs if a.size] or [np.zeros(1)])
    ys = np.concatenate([a for a in ys if a.size] or [np.zeros(1)])
    x0, x1, y0, y1 = xs.min(), xs.max(), ys.min(), ys.max()
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    mx, my = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    return x0 - mx, x1 + mx, y0 - my, y1 + my


def _render(fig: Figure) -> str:
    left, right, top, bottom = 70, 150, 40, 50
    pw, ph = fig.width - left - right, fig.height - top - bottom
    x0, x1, y0, y1 = _bounds(fig)
    if fig.equal_aspect:
        sx, sy = pw / (x1 - x0), ph / (y1 - y0)
        s = min(sx, sy)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        x0, x1 = cx - 0.5 * pw / s, cx + 0.5 * pw / s
        y0, y1 = cy - 0.5 * ph / s, cy + 0.5 * ph / s

    def X(v):
        return left + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fig.width}" height="{fig.height}" '
        f'viewBox="0 0 {fig.width} {fig.height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{fig.width}" height="{fig.height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
    ]
    for t in _nice_ticks(x0, x1):
        px = X(t)
        out.append(f'<line x1="{_fmt(px)}" y1="{top + ph}" x2="{_fmt(px)}" y2="{top + ph + 5}" stroke="#444"/>')
        out.append(f'<text x="{_fmt(px)}" y="{top + ph + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _nice_ticks(y0, y1):
        py = Y(t)
        out.append(f'<line x1="{left - 5}" y1="{_fmt(py)}" x2="{left}" y2="{_fmt(py)}" stroke="#444"/>')
        out.append(f'<text x="{left - 8}" y="{_fmt(py + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{fig.height - 10}" text-anchor="middle">{escape(fig.xlabel)}</text>')
    out.append(f'<text x="15" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 15 {top + ph / 2:.1f})">{escape(fig.ylabel)}</text>')
    if fig.title:
        out.append(f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(fig.title)}</text>')
    out.append(f'<clipPath id="plot"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></clipPath>')

    legend = []
    for i, s in enumerate(fig.series):
        color = s.color or PALETTE[i % len(PALETTE)]
        ok = np.isfinite(s.x) & np.isfinite(s.y)
        pts = " ".join(f"{_fmt(X(a))},{_fmt(Y(b))}" for a, b in zip(s.x[ok], s.y[ok]))
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        out.append(f'<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"/>')
        legend.append(("line", color, s.label, s.dashed))
    for j, m in enumerate(fig.markers):
        color = m.color or PALETTE[(len(fig.series) + j) % len(PALETTE)]
        for a, b in zip(m.x, m.y):
            out.append(_marker(m.shape, X(a), Y(b), color))
        legend.append((m.shape, color, m.label, False))

    lx, ly = left + pw + 12, top + 10
    for k, (kind, color, label, dashed) in enumerate(legend):
        yy = ly + 18 * k
        if kind == "line":
            dash = ' stroke-dasharray="6 4"' if dashed else ""
            out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 20}" y2="{yy}" stroke="{color}" stroke-width="1.5"{dash}/>')
        else:
            out.append(_marker(kind, lx + 10, yy, color))
        out.append(f'<text x="{lx + 26}" y="{yy + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _marker(shape: str, px: float, py: float, color: str) -> str:
    if shape == "square":
        return f'<rect x="{_fmt(px - 3.5)}" y="{_fmt(py - 3.5)}" width="7" height="7" fill="{color}"/>'
    if shape == "cross":
        return (f'<path d="M{_fmt(px - 4)},{_fmt(py - 4)} L{_fmt(px + 4)},{_fmt(py + 4)} '
                f'M{_fmt(px - 4)},{_fmt(py + 4)} L{_fmt(px + 4)},{_fmt(py - 4)}" stroke="{color}" stroke-width="2"/>')
    return f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3.5" fill="{color}"/>'
