"""Deterministic SVG rendering of point sets and their skeletons.

One circle per node, one line per edge, y axis flipped so mathematical
y-up appears upright in the image.  Identical inputs give byte-identical
documents, which makes the output diffable for golden-file tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

from .skeleton import PointSet, SkeletonGraph


@dataclass(frozen=True)
class RenderStyle:
    node_radius: float = 2.5
    edge_width: float = 1.0
    canvas_padding: float = 10.0
    node_fill: str = "black"
    edge_stroke: str = "black"

    def __post_init__(self):
        if not (math.isfinite(self.node_radius) and self.node_radius > 0.0):
            raise ValueError(f"node_radius must be positive, got {self.node_radius}")
        if not (math.isfinite(self.edge_width) and self.edge_width > 0.0):
            raise ValueError(f"edge_width must be positive, got {self.edge_width}")
        if not (math.isfinite(self.canvas_padding) and self.canvas_padding >= 0.0):
            raise ValueError(f"canvas_padding must be >= 0, got {self.canvas_padding}")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_svg(ps: PointSet, g: SkeletonGraph | None = None, style: RenderStyle = RenderStyle()) -> str:
    """SVG document text for a point set and (optionally) its edges."""
    if g is not None and g.n != len(ps):
        raise ValueError(f"graph has {g.n} nodes but point set has {len(ps)}")
    pad = style.canvas_padding
    if len(ps):
        xs = [p.x for p in ps]
        ys = [p.y for p in ps]
        xmin, xmax = min(xs), max(xs)
        ymin, ymax = min(ys), max(ys)
    else:
        xmin = xmax = ymin = ymax = 0.0
    width = (xmax - xmin) + 2.0 * pad
    height = (ymax - ymin) + 2.0 * pad

    def sx(x):
        return (x - xmin) + pad

    def sy(y):
        return (ymax - y) + pad

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    if g is not None:
        stroke = quoteattr(style.edge_stroke)
        for i, j in g.sorted_edges():
            a, b = ps[i], ps[j]
            out.append(
                f'<line x1="{_fmt(sx(a.x))}" y1="{_fmt(sy(a.y))}" '
                f'x2="{_fmt(sx(b.x))}" y2="{_fmt(sy(b.y))}" '
                f'stroke={stroke} stroke-width="{_fmt(style.edge_width)}"/>'
            )
    fill = quoteattr(style.node_fill)
    for p in ps:
        out.append(
            f'<circle cx="{_fmt(sx(p.x))}" cy="{_fmt(sy(p.y))}" '
            f'r="{_fmt(style.node_radius)}" fill={fill}/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
