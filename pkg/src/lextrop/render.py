"""SVG pictures of flattened rank-2 sets, one panel per point coordinate.

Panel i shows the projection of each piece to the plane (w_i[0], w_i[1]), clipped to
a square box.  Strict boundaries are dashed, closed ones solid; open lower-dimensional
pieces are dashed as a whole.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linsys
from .linsys import EQ, GT, Row
from .polyhedra import EuclideanPiece

__all__ = ["render_svg"]

PANEL = 240
MARGIN = 20
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _clip(poly: list[tuple[Fraction, Fraction]], a: Fraction, b: Fraction, c: Fraction):
    """Keep the part of a convex polygon where a*x + b*y >= c."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0) and fp != fq:
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    dedup = []
    for pt in out:
        if not dedup or dedup[-1] != pt:
            dedup.append(pt)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _panel_rows(piece: EuclideanPiece, i: int) -> list[Row] | None:
    keep = (2 * i, 2 * i + 1)
    rows = linsys.project_rows(piece.rows, piece.n, keep)
    if rows is None:
        return None
    return [((c[keep[0]], c[keep[1]]), r, rel) for c, r, rel in rows]


def _region(rows: list[Row], box: Fraction):
    poly = [(-box, -box), (box, -box), (box, box), (-box, box)]
    for (a, b), c, rel in rows:
        poly = _clip(poly, a, b, c)
        if rel == EQ:
            poly = _clip(poly, -a, -b, -c)
        if not poly:
            break
    return poly


def _on_line(p, q, a, b, c) -> bool:
    return a * p[0] + b * p[1] == c and a * q[0] + b * q[1] == c


def render_svg(pieces: Sequence[EuclideanPiece], d: int, bbox: int = 4, title: str = "") -> str:
    """SVG 1.1 document for pieces over R^(2*d) with d <= 2."""
    if d not in (1, 2):
        raise ValueError("rendering supports one or two point coordinates")
    for p in pieces:
        if p.n != 2 * d:
            raise ValueError("rendering supports rank 2 only")
    box = Fraction(bbox)
    scale = Fraction(PANEL, 2 * bbox)
    width = d * (PANEL + 2 * MARGIN)
    height = PANEL + 2 * MARGIN + (20 if title else 0)
    top = MARGIN + (20 if title else 0)

    def coords(pt, panel):
        x = MARGIN + panel * (PANEL + 2 * MARGIN) + (pt[0] + box) * scale
        y = top + (box - pt[1]) * scale
        return f"{float(x):.3f}", f"{float(y):.3f}"

    def xy(pt, panel):
        return ",".join(coords(pt, panel))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        out.append(f'<text x="{MARGIN}" y="16" font-family="sans-serif" font-size="13">{_escape(title)}</text>')
    for panel in range(d):
        x0 = MARGIN + panel * (PANEL + 2 * MARGIN)
        out.append(f'<g id="coordinate-{panel + 1}">')
        out.append(f'<rect x="{x0}" y="{top}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>')
        ox, oy = coords((Fraction(0), Fraction(0)), panel)
        out.append(f'<line x1="{x0}" y1="{oy}" x2="{x0 + PANEL}" y2="{oy}" stroke="#ddd"/>')
        out.append(f'<line x1="{ox}" y1="{top}" x2="{ox}" y2="{top + PANEL}" stroke="#ddd"/>')
        for idx, piece in enumerate(pieces):
            color = COLORS[idx % len(COLORS)]
            rows = _panel_rows(piece, panel)
            if rows is None:
                continue
            poly = _region(rows, box)
            if not poly:
                continue
            is_open = any(rel == GT for _, _, rel in rows)
            if len(poly) == 1:
                fill = "white" if is_open else color
                cx, cy = coords(poly[0], panel)
                out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="{fill}" stroke="{color}"/>')
                continue
            if len(poly) == 2 or _collinear(poly):
                ends = _extremes(poly)
                dash = ' stroke-dasharray="5,4"' if is_open else ""
                out.append(f'<polyline points="{xy(ends[0], panel)} {xy(ends[1], panel)}" fill="none" '
                           f'stroke="{color}" stroke-width="2"{dash}/>')
                continue
            pts = " ".join(xy(p, panel) for p in poly)
            out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.25" stroke="none"/>')
            for j in range(len(poly)):
                p, q = poly[j], poly[(j + 1) % len(poly)]
                strict = None
                for (a, b), c, rel in rows:
                    if _on_line(p, q, a, b, c):
                        strict = rel == GT
                        break
                if strict is None:
                    continue  # box edge
                dash = ' stroke-dasharray="5,4"' if strict else ""
                (x1, y1), (x2, y2) = coords(p, panel), coords(q, panel)
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _collinear(poly) -> bool:
    (x0, y0), (x1, y1) = poly[0], poly[1]
    return all((x1 - x0) * (y - y0) == (y1 - y0) * (x - x0) for x, y in poly[2:])


def _extremes(poly):
    pts = sorted(poly)
    return pts[0], pts[-1]


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
