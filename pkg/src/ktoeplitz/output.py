"""CSV / JSON / SVG emitters. Complex numbers are always split into re, im."""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
SVG_SIZE = 800
MARGIN = 0.05


def cpair(c: complex) -> list[float]:
    c = complex(c)
    # adding 0.0 folds -0.0 into 0.0 so output does not depend on roundoff sign
    return [float(c.real) + 0.0, float(c.imag) + 0.0]


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


class _Frame:
    """Maps data coordinates onto the fixed square viewport."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        x0, x1 = (float(xs.min()), float(xs.max())) if xs.size else (-1.0, 1.0)
        y0, y1 = (float(ys.min()), float(ys.max())) if ys.size else (-1.0, 1.0)
        if x1 - x0 < 1e-12:
            x0, x1 = x0 - 1.0, x1 + 1.0
        if y1 - y0 < 1e-12:
            y0, y1 = y0 - 1.0, y1 + 1.0
        dx, dy = (x1 - x0) * MARGIN, (y1 - y0) * MARGIN
        self.x0, self.x1, self.y0, self.y1 = x0 - dx, x1 + dx, y0 - dy, y1 + dy

    def px(self, x):
        return (np.asarray(x) - self.x0) / (self.x1 - self.x0) * SVG_SIZE

    def py(self, y):
        return SVG_SIZE - (np.asarray(y) - self.y0) / (self.y1 - self.y0) * SVG_SIZE


def svg_plot(curves: Sequence[np.ndarray] = (), points: np.ndarray | None = None,
             title: str = "") -> str:
    """Polylines for ``curves`` and 2px dots for ``points``, plotted as (re, im)."""
    pts = np.asarray(points if points is not None else [], dtype=complex)
    allv = np.concatenate([np.ravel(c) for c in curves] + [pts]) if (len(curves) or pts.size) \
        else np.zeros(0, complex)
    fr = _Frame(allv.real, allv.imag)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
           f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
           f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>']
    if fr.x0 < 0 < fr.x1:
        x = float(fr.px(0.0))
        out.append(f'<line x1="{x:.2f}" y1="0" x2="{x:.2f}" y2="{SVG_SIZE}" stroke="#cccccc"/>')
    if fr.y0 < 0 < fr.y1:
        y = float(fr.py(0.0))
        out.append(f'<line x1="0" y1="{y:.2f}" x2="{SVG_SIZE}" y2="{y:.2f}" stroke="#cccccc"/>')
    for i, c in enumerate(curves):
        c = np.asarray(c, dtype=complex)
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(fr.px(c.real), fr.py(c.imag)))
        out.append(f'<polyline fill="none" stroke="{PALETTE[i % len(PALETTE)]}" '
                   f'stroke-width="1" points="{coords}"/>')
    for x, y in zip(fr.px(pts.real), fr.py(pts.imag)):
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="black"/>')
    if title:
        out.append(f'<text x="10" y="20" font-family="monospace" font-size="14">{title}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
