"""Minimal deterministic SVG plots.

Fixed 960x320 viewport, fixed tick placement, no timestamps or randomness,
so repeated runs emit byte-identical files. Used by the CLI to mirror the
envelope-spectrum figures with zone boundary markers.
"""

import numpy as np

WIDTH = 960
HEIGHT = 320
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 56, 16, 16, 36


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = np.linspace(lo, hi, count)
    return [float(f"{v:.6g}") for v in raw]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def spectrum_svg(freqs, mags, boundaries=(), title: str = "") -> str:
    """Polyline spectrum with vertical boundary lines; axis labels only."""
    freqs = np.asarray(freqs, dtype=float)
    mags = np.asarray(mags, dtype=float)
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
    f_lo, f_hi = float(freqs[0]), float(freqs[-1])
    m_hi = float(mags.max()) if mags.max() > 0 else 1.0

    def sx(f):
        return x0 + (f - f_lo) / (f_hi - f_lo) * (x1 - x0)

    def sy(m):
        return y0 + (m / m_hi) * (y1 - y0)

    points = " ".join(f"{sx(f):.2f},{sy(m):.2f}" for f, m in zip(freqs, mags))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for tick in _ticks(f_lo, f_hi):
        x = sx(tick)
        parts.append(f'<line x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{y0 + 18}" font-size="11" text-anchor="middle">'
            f"{_fmt(tick)}</text>"
        )
    for tick in _ticks(0.0, m_hi):
        y = sy(tick)
        parts.append(f'<line x1="{x0 - 5}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">'
            f"{tick:.3g}</text>"
        )
    for b in boundaries:
        x = sx(float(b))
        parts.append(
            f'<line x1="{x:.2f}" y1="{y1}" x2="{x:.2f}" y2="{y0}" '
            f'stroke="red" stroke-dasharray="4 3"/>'
        )
    parts.append(f'<polyline points="{points}" fill="none" stroke="steelblue"/>')
    parts.append(
        f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 6}" font-size="12" '
        f'text-anchor="middle">frequency (Hz)</text>'
    )
    parts.append(
        f'<text x="14" y="{(y0 + y1) / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2})">magnitude</text>'
    )
    if title:
        parts.append(
            f'<text x="{x1}" y="{y1 + 12}" font-size="12" text-anchor="end">{title}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
