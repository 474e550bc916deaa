"""Static SVG emitters for band stacks, CDF curves, and sweep heat grids.

Output is deterministic: fixed viewport, fixed float formatting, metadata
embedded as an escaped JSON payload in a <metadata> element.  No interactivity.
"""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

WIDTH = 800.0
HEIGHT = 400.0
MARGIN = 40.0


def _fmt(x: float) -> str:
    return format(x, ".4f")


def _document(body: list[str], metadata: dict | None) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" height="{HEIGHT:.0f}" '
        f'viewBox="0 0 {WIDTH:.0f} {HEIGHT:.0f}">',
    ]
    if metadata is not None:
        head.append("<metadata>" + escape(json.dumps(metadata, sort_keys=True)) + "</metadata>")
    head.append(f'<rect x="0" y="0" width="{WIDTH:.0f}" height="{HEIGHT:.0f}" fill="white"/>')
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _x_scale(lo: float, hi: float):
    span = hi - lo if hi > lo else 1.0
    usable = WIDTH - 2 * MARGIN

    def to_x(v: float) -> float:
        return MARGIN + (v - lo) / span * usable

    return to_x


def band_stack_svg(covers, metadata: dict | None = None) -> str:
    """One horizontal row of bands per cover, stacked top (coarse) to bottom."""
    covers = [c for c in covers if not c.is_empty]
    if not covers:
        return _document(['<text x="20" y="40">empty cover</text>'], metadata)
    lo = min(c.hull[0] for c in covers)
    hi = max(c.hull[1] for c in covers)
    to_x = _x_scale(lo, hi)
    rows = len(covers)
    row_h = (HEIGHT - 2 * MARGIN) / rows
    body = []
    for i, cover in enumerate(covers):
        y = MARGIN + i * row_h
        label = f"level {cover.level}" if cover.level is not None else f"row {i}"
        body.append(
            f'<text x="4" y="{_fmt(y + 0.6 * row_h)}" font-size="11">{escape(label)}</text>'
        )
        for a, b in cover.intervals:
            w = max(to_x(b) - to_x(a), 0.3)
            body.append(
                f'<rect x="{_fmt(to_x(a))}" y="{_fmt(y + 0.15 * row_h)}" '
                f'width="{_fmt(w)}" height="{_fmt(0.7 * row_h)}" fill="#27496d"/>'
            )
    body.append(
        f'<text x="{_fmt(MARGIN)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(lo)}</text>'
    )
    body.append(
        f'<text x="{_fmt(WIDTH - MARGIN - 40)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(hi)}</text>'
    )
    return _document(body, metadata)


def curve_svg(xs, ys, metadata: dict | None = None, y_range=(0.0, 1.0)) -> str:
    """Polyline plot of a curve (typically a CDF) over a frame."""
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    if not xs:
        return _document(['<text x="20" y="40">empty curve</text>'], metadata)
    to_x = _x_scale(min(xs), max(xs))
    y_lo, y_hi = y_range
    span = y_hi - y_lo if y_hi > y_lo else 1.0

    def to_y(v: float) -> float:
        return HEIGHT - MARGIN - (v - y_lo) / span * (HEIGHT - 2 * MARGIN)

    pts = " ".join(f"{_fmt(to_x(x))},{_fmt(to_y(y))}" for x, y in zip(xs, ys))
    body = [
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(WIDTH - 2 * MARGIN)}" '
        f'height="{_fmt(HEIGHT - 2 * MARGIN)}" fill="none" stroke="#999"/>',
        f'<polyline points="{pts}" fill="none" stroke="#b33" stroke-width="1.5"/>',
        f'<text x="{_fmt(MARGIN)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(min(xs))}</text>',
        f'<text x="{_fmt(WIDTH - MARGIN - 40)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(max(xs))}</text>',
    ]
    return _document(body, metadata)


def heat_grid_svg(x_values, y_values, cell_colors, metadata: dict | None = None) -> str:
    """Grid of colored cells; ``cell_colors[i][j]`` colors (x_values[i], y_values[j])."""
    nx, ny = len(x_values), len(y_values)
    if nx == 0 or ny == 0:
        return _document(['<text x="20" y="40">empty grid</text>'], metadata)
    cw = (WIDTH - 2 * MARGIN) / nx
    ch = (HEIGHT - 2 * MARGIN) / ny
    body = []
    for i in range(nx):
        for j in range(ny):
            body.append(
                f'<rect x="{_fmt(MARGIN + i * cw)}" y="{_fmt(HEIGHT - MARGIN - (j + 1) * ch)}" '
                f'width="{_fmt(cw)}" height="{_fmt(ch)}" fill="{cell_colors[i][j]}" '
                f'stroke="#fff" stroke-width="0.5"/>'
            )
    body.append(f'<text x="{_fmt(MARGIN)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(float(x_values[0]))}</text>')
    body.append(
        f'<text x="{_fmt(WIDTH - MARGIN - 40)}" y="{_fmt(HEIGHT - 8)}" font-size="11">{_fmt(float(x_values[-1]))}</text>'
    )
    return _document(body, metadata)
