"""Minimal static SVG charts: line plots with bands, and scatter plus reference curve."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=64, right=150, top=36, bottom=48)
PALETTE = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi
        self.x0 = MARGIN["left"]
        self.x1 = WIDTH - MARGIN["right"]
        self.y0 = HEIGHT - MARGIN["bottom"]
        self.y1 = MARGIN["top"]

    def px(self, x):
        return self.x0 + (np.asarray(x, dtype=float) - self.xlo) / (self.xhi - self.xlo) * (self.x1 - self.x0)

    def py(self, y):
        return self.y0 - (np.asarray(y, dtype=float) - self.ylo) / (self.yhi - self.ylo) * (self.y0 - self.y1)

    def axes(self, title, xlabel, ylabel) -> list[str]:
        out = [
            f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" height="{self.y0 - self.y1}" '
            'fill="none" stroke="#333" stroke-width="1"/>'
        ]
        for t in _ticks(self.xlo, self.xhi):
            x = float(self.px(t))
            out.append(f'<line x1="{x:.2f}" y1="{self.y0}" x2="{x:.2f}" y2="{self.y0 + 5}" stroke="#333"/>')
            out.append(f'<text x="{x:.2f}" y="{self.y0 + 18}" text-anchor="middle">{t:.4g}</text>')
        for t in _ticks(self.ylo, self.yhi):
            y = float(self.py(t))
            out.append(f'<line x1="{self.x0 - 5}" y1="{y:.2f}" x2="{self.x0}" y2="{y:.2f}" stroke="#333"/>')
            out.append(f'<text x="{self.x0 - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.4g}</text>')
        cx = (self.x0 + self.x1) / 2
        cy = (self.y0 + self.y1) / 2
        out.append(f'<text x="{cx}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
        out.append(
            f'<text x="16" y="{cy}" text-anchor="middle" transform="rotate(-90 16 {cy})">{escape(ylabel)}</text>'
        )
        out.append(f'<text x="{cx}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
        return out

    def legend(self, entries) -> list[str]:
        out = []
        for i, (label, color, dashed) in enumerate(entries):
            y = self.y1 + 14 + 18 * i
            dash = ' stroke-dasharray="6 4"' if dashed else ""
            out.append(
                f'<line x1="{self.x1 + 12}" y1="{y}" x2="{self.x1 + 36}" y2="{y}" stroke="{color}" '
                f'stroke-width="2"{dash}/>'
            )
            out.append(f'<text x="{self.x1 + 42}" y="{y + 4}">{escape(label)}</text>')
        return out


def _path(frame, x, y) -> str:
    return " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(frame.px(x), frame.py(y)))


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">'
    )
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>', *body, "</svg>"]) + "\n"


def _finite_range(arrays) -> tuple[float, float]:
    vals = np.concatenate([np.asarray(a, dtype=float).ravel() for a in arrays])
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        return 0.0, 1.0
    return float(vals.min()), float(vals.max())


def line_plot(x, lines: dict, bands: dict | None = None, title="", xlabel="x", ylabel="y") -> str:
    """Curves sharing one x grid; ``bands`` maps a line name to (lower, upper)."""
    bands = bands or {}
    x = np.asarray(x, dtype=float)
    ylo, yhi = _finite_range(list(lines.values()) + [v for pair in bands.values() for v in pair])
    ylo = min(ylo, 0.0)
    pad = 0.05 * (yhi - ylo or 1.0)
    frame = _Frame(float(x.min()), float(x.max()), ylo, yhi + pad)
    body = frame.axes(title, xlabel, ylabel)
    colors = {name: PALETTE[i % len(PALETTE)] for i, name in enumerate(lines)}
    for name, (lo, hi) in bands.items():
        color = colors.get(name, PALETTE[-1])
        pts = _path(frame, x, hi) + " " + _path(frame, x[::-1], np.asarray(lo)[::-1])
        body.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.18" stroke="none"/>')
    legend = []
    for name, y in lines.items():
        dashed = name == "truth"
        color = PALETTE[1] if dashed else colors[name]
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        body.append(
            f'<polyline points="{_path(frame, x, y)}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>'
        )
        legend.append((name, color, dashed))
    body += frame.legend(legend)
    return _document(body)


def scatter_with_curve(xs, ys, cx, cy, title="", xlabel="x", ylabel="y", curve_label="rate") -> str:
    """Point cloud plus a reference curve drawn through ``(cx, cy)``."""
    xlo, xhi = _finite_range([xs, cx])
    ylo, yhi = _finite_range([ys, cy])
    xpad = 0.05 * (xhi - xlo or 1.0)
    frame = _Frame(xlo - xpad, xhi + xpad, 0.0, 1.05 * yhi)
    body = frame.axes(title, xlabel, ylabel)
    for a, b in zip(frame.px(xs), frame.py(ys)):
        body.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2.2" fill="{PALETTE[0]}" fill-opacity="0.6"/>')
    body.append(
        f'<polyline points="{_path(frame, cx, cy)}" fill="none" stroke="{PALETTE[1]}" stroke-width="1.8"/>'
    )
    body += frame.legend([("d_H per run", PALETTE[0], False), (curve_label, PALETTE[1], False)])
    return _document(body)
