"""SVG pictures of periodic witnesses.

The fundamental domain is drawn 2x2 times (a single copy for non-periodic
regions) with its outline in black, followed by a legend.  Colors depend only
on tile ids, so the same tile is drawn the same way in every picture.
"""
from __future__ import annotations

import colorsys
from xml.sax.saxutils import escape

from .core import RegionAssignment

CELL = 24
LEGEND_ROW = 18


def tile_color(tile_id: int) -> str:
    # golden-ratio hue walk: neighbouring ids get well separated hues
    hue = (tile_id * 0.618033988749895) % 1.0
    light = 0.55 if tile_id % 2 else 0.7
    r, g, b = colorsys.hls_to_rgb(hue, light, 0.65)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def render_svg(region: RegionAssignment, labels: dict[int, str] | None = None) -> str:
    labels = labels or {}
    w, h = region.width, region.height
    rx = 2 if region.wrap_x else 1
    ry = 2 if region.wrap_y else 1
    used = sorted({v for row in region.cells for v in row})
    gw, gh = w * rx * CELL, h * ry * CELL
    width = max(gw, 160) + 2
    height = gh + 2 + 8 + LEGEND_ROW * len(used)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">']
    for cy in range(h * ry):
        for cx in range(w * rx):
            t = region.cells[cy % h][cx % w]
            # row 0 is the bottom row: flip for screen coordinates
            sy = (h * ry - 1 - cy) * CELL + 1
            out.append(f'<rect x="{cx * CELL + 1}" y="{sy}" width="{CELL}" height="{CELL}" '
                       f'fill="{tile_color(t)}" stroke="#ffffff" stroke-width="0.5"/>')
    out.append(f'<rect class="period" x="1" y="{gh - h * CELL + 1}" width="{w * CELL}" '
               f'height="{h * CELL}" fill="none" stroke="#000000" stroke-width="2"/>')
    for k, t in enumerate(used):
        y = gh + 10 + k * LEGEND_ROW
        out.append(f'<rect x="1" y="{y}" width="14" height="14" fill="{tile_color(t)}"/>')
        out.append(f'<text x="20" y="{y + 12}" font-family="monospace" font-size="12">'
                   f'{t}: {escape(labels.get(t, str(t)))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
