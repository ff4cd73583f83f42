"""Dependency-free SVG rendering of estimation results.

Two figures: a bar chart of indices (with bootstrap whiskers and an optional
dashed irrelevance-threshold line) and stacked per-input panels of scaled
local separations against the class representatives.
"""
from __future__ import annotations

import numpy as np

from .data import IndexEstimate

_FONT = "font-family='Helvetica,Arial,sans-serif'"


def _esc(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _ticks(hi: float, max_ticks: int = 6) -> list[float]:
    if hi <= 0:
        return [0.0]
    raw = hi / max_ticks
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    else:
        step = 10.0 * mag
    return [i * step for i in range(int(hi / step) + 2) if i * step <= hi * 1.001]


def render_indices_svg(est: IndexEstimate, threshold: float | None = None,
                       title: str = "sensitivity indices") -> str:
    """Bar chart of per-input indices, CI whiskers when bootstrap is present."""
    names = est.input_names
    vals = est.indices
    has_ci = est.bootstrap is not None and "index" in est.bootstrap.stats
    lo = hi = None
    top = float(vals.max())
    if has_ci:
        tab = est.bootstrap.stats["index"]
        lo, hi = tab.ci_low, tab.ci_high
        top = max(top, float(hi.max()))
    if threshold is not None:
        top = max(top, threshold)
    top = max(top * 1.12, 1e-12)

    width, height = 640, 360
    ml, mr, mt, mb = 64, 16, 34, 56
    pw, ph = width - ml - mr, height - mt - mb

    def sx(i: float) -> float:
        return ml + pw * i

    def sy(v: float) -> float:
        return mt + ph * (1.0 - v / top)

    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}' "
        f"viewBox='0 0 {width} {height}'>",
        f"<rect width='{width}' height='{height}' fill='white'/>",
        f"<text x='{ml}' y='20' {_FONT} font-size='14'>{_esc(title)}</text>",
        f"<line x1='{ml}' y1='{mt}' x2='{ml}' y2='{mt + ph}' stroke='black'/>",
        f"<line x1='{ml}' y1='{mt + ph}' x2='{ml + pw}' y2='{mt + ph}' stroke='black'/>",
    ]
    for t in _ticks(top):
        y = sy(t)
        parts.append(f"<line x1='{ml - 4}' y1='{y:.2f}' x2='{ml}' y2='{y:.2f}' "
                     f"stroke='black'/>")
        parts.append(f"<text x='{ml - 8}' y='{y + 4:.2f}' {_FONT} font-size='11' "
                     f"text-anchor='end'>{t:g}</text>")

    d = len(names)
    slot = pw / d
    bar = slot * 0.6
    for i, name in enumerate(names):
        cx = ml + slot * (i + 0.5)
        x0 = cx - bar / 2
        y0 = sy(float(vals[i]))
        parts.append(f"<rect x='{x0:.2f}' y='{y0:.2f}' width='{bar:.2f}' "
                     f"height='{mt + ph - y0:.2f}' fill='#4878a8'/>")
        if has_ci:
            yl, yh = sy(float(lo[i])), sy(float(hi[i]))
            parts.append(f"<line x1='{cx:.2f}' y1='{yl:.2f}' x2='{cx:.2f}' "
                         f"y2='{yh:.2f}' stroke='black' stroke-width='1.2'/>")
            for yy in (yl, yh):
                parts.append(f"<line x1='{cx - 5:.2f}' y1='{yy:.2f}' "
                             f"x2='{cx + 5:.2f}' y2='{yy:.2f}' stroke='black'/>")
        parts.append(f"<text x='{cx:.2f}' y='{mt + ph + 16}' {_FONT} "
                     f"font-size='11' text-anchor='middle'>{_esc(name)}</text>")

    if threshold is not None:
        y = sy(threshold)
        parts.append(f"<line x1='{ml}' y1='{y:.2f}' x2='{ml + pw}' y2='{y:.2f}' "
                     f"stroke='#c03028' stroke-dasharray='6 4'/>")
        parts.append(f"<text x='{ml + pw}' y='{y - 5:.2f}' {_FONT} font-size='11' "
                     f"text-anchor='end' fill='#c03028'>threshold {threshold:.3g}</text>")

    parts.append("</svg>")
    return "\n".join(parts)


def render_separations_svg(est: IndexEstimate,
                           title: str = "scaled local separations") -> str:
    """Stacked panels: per-class separation against class representative."""
    names = est.input_names
    d = len(names)
    h_panel, width = 110, 640
    ml, mr = 64, 16
    height = 34 + d * h_panel + 20
    pw = width - ml - mr
    top = max(float(est.separations.max()) * 1.15, 1e-12)

    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}' "
        f"viewBox='0 0 {width} {height}'>",
        f"<rect width='{width}' height='{height}' fill='white'/>",
        f"<text x='{ml}' y='20' {_FONT} font-size='14'>{_esc(title)}</text>",
    ]
    for i, name in enumerate(names):
        oy = 34 + i * h_panel
        ph = h_panel - 30
        xs = est.representatives[i]
        ys = est.separations[i]
        x_lo, x_hi = float(xs.min()), float(xs.max())
        span = (x_hi - x_lo) or 1.0

        def sx(v: float) -> float:
            return ml + pw * (v - x_lo) / span

        def sy(v: float) -> float:
            return oy + ph * (1.0 - v / top)

        parts.append(f"<rect x='{ml}' y='{oy}' width='{pw}' height='{ph}' "
                     f"fill='none' stroke='#999'/>")
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(v)):.2f}"
                       for x, v in zip(xs, ys))
        parts.append(f"<polyline points='{pts}' fill='none' stroke='#4878a8' "
                     f"stroke-width='1.5'/>")
        for x, v in zip(xs, ys):
            parts.append(f"<circle cx='{sx(float(x)):.2f}' cy='{sy(float(v)):.2f}' "
                         f"r='2.4' fill='#1f4e79'/>")
        parts.append(f"<text x='{ml + 6}' y='{oy + 14}' {_FONT} font-size='11' "
                     f"fill='#333'>{_esc(name)}</text>")
        parts.append(f"<text x='{ml - 8}' y='{oy + 10}' {_FONT} font-size='10' "
                     f"text-anchor='end'>{top:.2g}</text>")
        parts.append(f"<text x='{ml - 8}' y='{oy + ph:.0f}' {_FONT} font-size='10' "
                     f"text-anchor='end'>0</text>")
        parts.append(f"<text x='{ml}' y='{oy + ph + 13}' {_FONT} font-size='10'>"
                     f"{x_lo:.3g}</text>")
        parts.append(f"<text x='{ml + pw}' y='{oy + ph + 13}' {_FONT} font-size='10' "
                     f"text-anchor='end'>{x_hi:.3g}</text>")
    parts.append("</svg>")
    return "\n".join(parts)
