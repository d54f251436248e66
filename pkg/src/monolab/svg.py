"""Minimal self-contained SVG line charts.

No plotting dependency: the experiment figures are simple enough (one line
per regime, error bars, legend) that emitting the SVG text directly keeps
output deterministic and diffable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

WIDTH = 880
HEIGHT = 560
MARGIN_LEFT = 88
MARGIN_RIGHT = 190
MARGIN_TOP = 48
MARGIN_BOTTOM = 72

PALETTE = ("#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9")


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple
    ys: tuple
    errs: tuple = field(default=())  # half-height of the error bar, may be empty


def _nice_step(span: float, target_ticks: int = 5) -> float:
    raw = span / max(target_ticks, 1)
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_line_chart(
    series: list[Series],
    x_label: str,
    y_label: str,
    title: str = "",
) -> str:
    """Render series as a line chart with optional error bars; returns SVG text."""
    if not series:
        raise ValueError("nothing to plot: no series")
    for s in series:
        if len(s.xs) != len(s.ys) or (s.errs and len(s.errs) != len(s.xs)):
            raise ValueError(f"series {s.label!r} has mismatched lengths")
        if len(s.xs) == 0:
            raise ValueError(f"series {s.label!r} is empty")

    xs_all = [x for s in series for x in s.xs]
    ys_lo = [y - (s.errs[i] if s.errs else 0.0) for s in series for i, y in enumerate(s.ys)]
    ys_hi = [y + (s.errs[i] if s.errs else 0.0) for s in series for i, y in enumerate(s.ys)]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_lo), max(ys_hi)
    if x_hi == x_lo:
        pad = max(0.5, abs(x_lo) * 0.05)
        x_lo, x_hi = x_lo - pad, x_hi + pad
    else:
        pad = 0.04 * (x_hi - x_lo)
        x_lo, x_hi = x_lo - pad, x_hi + pad
    if y_hi == y_lo:
        pad = max(0.5, abs(y_lo) * 0.05)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        pad = 0.06 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">'
    )
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" '
            f'font-size="17">{_escape(title)}</text>'
        )

    # gridlines and ticks
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        out.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_TOP}" x2="{x:.2f}" '
            f'y2="{MARGIN_TOP + plot_h}" stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN_TOP + plot_h + 22}" text-anchor="middle" '
            f'font-size="13">{_fmt(t)}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        out.append(
            f'<line x1="{MARGIN_LEFT}" y1="{y:.2f}" x2="{MARGIN_LEFT + plot_w}" '
            f'y2="{y:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="13">{_fmt(t)}</text>'
        )

    # frame and axis labels
    out.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 18}" '
        f'text-anchor="middle" font-size="15">{_escape(x_label)}</text>'
    )
    out.append(
        f'<text x="24" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-size="15" transform="rotate(-90 24 {MARGIN_TOP + plot_h / 2:.1f})">'
        f"{_escape(y_label)}</text>"
    )

    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.xs, s.ys))
        if s.errs:
            for x, y, e in zip(s.xs, s.ys, s.errs):
                if e <= 0:
                    continue
                cx, y1, y2 = px(x), py(y - e), py(y + e)
                out.append(
                    f'<line x1="{cx:.2f}" y1="{y1:.2f}" x2="{cx:.2f}" y2="{y2:.2f}" '
                    f'stroke="{color}" stroke-width="1.2"/>'
                )
                for yy in (y1, y2):
                    out.append(
                        f'<line x1="{cx - 4:.2f}" y1="{yy:.2f}" x2="{cx + 4:.2f}" '
                        f'y2="{yy:.2f}" stroke="{color}" stroke-width="1.2"/>'
                    )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for x, y in zip(s.xs, s.ys):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')

    # legend
    lx = MARGIN_LEFT + plot_w + 16
    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        ly = MARGIN_TOP + 12 + idx * 22
        out.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<circle cx="{lx + 12}" cy="{ly}" r="3" fill="{color}"/>')
        out.append(
            f'<text x="{lx + 30}" y="{ly + 4}" font-size="13">{_escape(s.label)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
