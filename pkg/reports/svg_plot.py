"""
Deterministic log-log SVG plot of separation radii.

One polyline per series and, for each series dimension d, a dashed
reference curve N^(-1/d) through the series value at N = 2 (or its first
point). All coordinates are printed with fixed precision so identical
input gives byte-identical output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

from geometry.radii import RadiiRecord
from utils.errors import InvalidInputError
from utils.files import write_text_atomic

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


@dataclass
class Series:
    label: str
    d: int
    records: Sequence[RadiiRecord]


@dataclass
class PlotSpec:
    title: str = "Separation radius q(P_N)"
    x_label: str = "N"
    y_label: str = "q(P_N)"
    width: int = 800
    height: int = 560
    reference_lines: bool = True
    series: List[Series] = field(default_factory=list)

    def add(self, label: str, d: int, records: Sequence[RadiiRecord]) -> "PlotSpec":
        self.series.append(Series(label, d, records))
        return self


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _points(series: Series) -> List[Tuple[float, float]]:
    return [(float(r.N), r.q) for r in series.records if r.N > 0 and r.q > 0]


def _reference(series: Series) -> List[Tuple[float, float]]:
    pts = _points(series)
    anchor = next(((n, q) for n, q in pts if n == 2.0), pts[0])
    n0, q0 = anchor
    scale = q0 * n0 ** (1.0 / series.d)
    return [(n, scale * n ** (-1.0 / series.d)) for n in (n0, pts[-1][0])]


def render_svg(spec: PlotSpec) -> str:
    """
    Render ``spec`` as a standalone SVG document.

    Raises:
        InvalidInputError: no series, or a series without positive values
    """
    if not spec.series:
        raise InvalidInputError("nothing to plot")
    for s in spec.series:
        if not _points(s):
            raise InvalidInputError(f"series {s.label!r} has no positive values")
    curves = [_points(s) for s in spec.series]
    refs = [_reference(s) for s in spec.series] if spec.reference_lines else []
    xs = [math.log10(n) for c in curves + refs for n, _ in c]
    ys = [math.log10(q) for c in curves + refs for _, q in c]
    x_min, x_max = math.floor(min(xs)), math.ceil(max(xs))
    y_min, y_max = math.floor(min(ys)), math.ceil(max(ys))
    if x_max == x_min:
        x_max += 1
    if y_max == y_min:
        y_max += 1

    margin_l, margin_r, margin_t, margin_b = 80, 30, 50, 60
    plot_w = spec.width - margin_l - margin_r
    plot_h = spec.height - margin_t - margin_b

    def sx(n: float) -> float:
        return margin_l + (math.log10(n) - x_min) / (x_max - x_min) * plot_w

    def sy(q: float) -> float:
        return margin_t + (1.0 - (math.log10(q) - y_min) / (y_max - y_min)) * plot_h

    x0, y0 = margin_l, margin_t + plot_h
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
           f'viewBox="0 0 {spec.width} {spec.height}">',
           '<style>text { font-family: sans-serif; font-size: 12px; }</style>',
           '<rect x="0" y="0" width="100%" height="100%" fill="white" />',
           f'<text x="{spec.width / 2:.1f}" y="{margin_t - 20}" text-anchor="middle" font-size="16">'
           f'{escape(spec.title)}</text>']
    for e in range(x_min, x_max + 1):
        x = margin_l + (e - x_min) / (x_max - x_min) * plot_w
        out.append(f'<line x1="{_fmt(x)}" y1="{y0}" x2="{_fmt(x)}" y2="{y0 + 6}" stroke="black" />')
        out.append(f'<text x="{_fmt(x)}" y="{y0 + 20}" text-anchor="middle">10^{e}</text>')
    for e in range(y_min, y_max + 1):
        y = margin_t + (1.0 - (e - y_min) / (y_max - y_min)) * plot_h
        out.append(f'<line x1="{x0 - 6}" y1="{_fmt(y)}" x2="{x0 + plot_w}" y2="{_fmt(y)}" stroke="#e5e5e5" />')
        out.append(f'<text x="{x0 - 10}" y="{_fmt(y + 4)}" text-anchor="end">10^{e}</text>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black" stroke-width="1.5" />')
    out.append(f'<line x1="{x0}" y1="{margin_t}" x2="{x0}" y2="{y0}" stroke="black" stroke-width="1.5" />')
    out.append(f'<text x="{x0 + plot_w / 2:.1f}" y="{spec.height - 15}" text-anchor="middle">{escape(spec.x_label)}</text>')
    mid = margin_t + plot_h / 2
    out.append(f'<text x="20" y="{mid:.1f}" text-anchor="middle" transform="rotate(-90 20 {mid:.1f})">'
               f'{escape(spec.y_label)}</text>')

    for i, (s, pts) in enumerate(zip(spec.series, curves)):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(sx(n))},{_fmt(sy(q))}" for n, q in pts)
        out.append(f'<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{coords}" />')
        if refs:
            ref = " ".join(f"{_fmt(sx(n))},{_fmt(sy(q))}" for n, q in refs[i])
            out.append(f'<polyline class="reference" fill="none" stroke="{color}" stroke-width="1" '
                       f'stroke-dasharray="6,4" points="{ref}" />')

    legend_x, legend_y = x0 + plot_w - 170, margin_t + 10
    for i, s in enumerate(spec.series):
        color = PALETTE[i % len(PALETTE)]
        y = legend_y + 18 * i
        out.append(f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 24}" y2="{y}" stroke="{color}" stroke-width="3" />')
        label = f"{s.label} (ref N^-1/{s.d})" if refs else s.label
        out.append(f'<text x="{legend_x + 32}" y="{y + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: str, spec: PlotSpec) -> str:
    return write_text_atomic(path, render_svg(spec))
