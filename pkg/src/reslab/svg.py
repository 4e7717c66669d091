"""Deterministic SVG rendering of tables, orbits, and marked corners.

Output depends only on the inputs: fixed viewBox (bounding box plus a 5%
margin), fixed 6-digit coordinate formatting, and colors assigned by index
from a fixed palette, so renders are usable as golden files.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

from .polygon import RectilinearPolygon

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#17becf",
)


def _fmt(v: float) -> str:
    s = f"{float(v):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _bbox(points: Iterable[Tuple[float, float]]):
    xs, ys = zip(*[(float(x), float(y)) for x, y in points])
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(
    polygon: RectilinearPolygon,
    orbits: Sequence[Sequence[Tuple[float, float]]] = (),
    marked: Sequence[Tuple[float, float]] = (),
    width: int = 640,
) -> str:
    """SVG document for a polygon, optional orbits, and marked corners."""
    pts = list(polygon.vertices())
    for orbit in orbits:
        pts.extend(orbit)
    pts.extend(marked)
    x0, y0, x1, y1 = _bbox(pts)
    mx = 0.05 * max(x1 - x0, 1e-9)
    my = 0.05 * max(y1 - y0, 1e-9)
    x0, y0, x1, y1 = x0 - mx, y0 - my, x1 + mx, y1 + my
    w, h = x1 - x0, y1 - y0
    height = max(1, round(width * h / w))
    stroke = max(w, h) / 320.0

    def tx(p):
        # flip y so the mathematical orientation matches the screen
        return _fmt(float(p[0])), _fmt(y1 - (float(p[1]) - y0) + y0)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">'
    ]
    path = []
    for loop in polygon.loops:
        cmds = []
        for i, v in enumerate(loop):
            px, py = tx(v)
            cmds.append(f"{'M' if i == 0 else 'L'} {px} {py}")
        cmds.append("Z")
        path.append(" ".join(cmds))
    lines.append(
        f'<path d="{" ".join(path)}" fill="#f2f2f2" fill-rule="evenodd" '
        f'stroke="#333333" stroke-width="{_fmt(stroke)}"/>'
    )
    for i, orbit in enumerate(orbits):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(",".join(tx(p)) for p in orbit)
        lines.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(0.7 * stroke)}"/>'
        )
    for i, p in enumerate(marked):
        px, py = tx(p)
        lines.append(
            f'<circle cx="{px}" cy="{py}" r="{_fmt(1.8 * stroke)}" '
            f'fill="#000000"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
