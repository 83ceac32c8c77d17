"""Dependency-free SVG line and scatter charts."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f1f1f", "#d62728", "#1f77b4", "#2ca02c", "#9467bd")


def _ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / count
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    return np.arange(np.ceil(lo / step) * step, hi + step * 1e-9, step)


def svg_chart(series, title: str = "", width: int = 720, height: int = 360, kind: str = "line") -> str:
    """Render ``series`` (a list of ``(x, y, label)`` triples) to SVG text.

    ``kind`` is ``"line"`` or ``"scatter"``; it applies to every series.
    """
    if not series:
        raise ValueError("nothing to plot")
    margin = 48
    xs = np.concatenate([np.asarray(s[0], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return margin + (np.asarray(x, dtype=float) - x0) / (x1 - x0) * (width - 2 * margin)

    def py(y):
        return height - margin - (np.asarray(y, dtype=float) - y0) / (y1 - y0) * (height - 2 * margin)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'font-family="sans-serif" font-size="11">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
             f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
             f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>']
    for t in _ticks(x0, x1):
        parts.append(f'<text x="{px(t):.1f}" y="{height - margin + 14}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        parts.append(f'<text x="{margin - 4}" y="{py(t) + 4:.1f}" text-anchor="end">{t:g}</text>')
    for idx, (x, y, label) in enumerate(series):
        colour = PALETTE[idx % len(PALETTE)]
        X, Y = px(x), py(y)
        if kind == "scatter":
            parts.extend(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="1.6" fill="{colour}"/>' for a, b in zip(X, Y))
        else:
            pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(X, Y))
            parts.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1"/>')
        parts.append(f'<text x="{width - margin}" y="{margin + 14 * idx}" text-anchor="end" fill="{colour}">'
                     f'{escape(str(label))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
