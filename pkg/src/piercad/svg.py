"""SVG emission for quick visual inspection.

A debugging aid only: SVG files are not part of the per-sample modality
set and never appear in the manifest.
"""

from __future__ import annotations

from .drawing import Circle, LineSegment, Polyline, View

_MARGIN = 600


def write_svg(view: View) -> bytes:
    xmin, ymin, xmax, ymax = view.bbox
    xmin -= _MARGIN
    ymin -= _MARGIN
    xmax += _MARGIN
    ymax += _MARGIN
    # SVG y grows downward; flip around the box midline.
    def fy(y: int) -> int:
        return ymax + ymin - y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{xmin} {ymin} {xmax - xmin} {ymax - ymin}">',
        f'<rect x="{xmin}" y="{ymin}" width="{xmax - xmin}" height="{ymax - ymin}" fill="white"/>',
    ]
    style = 'stroke="black" stroke-width="40" fill="none"'
    for p in view.primitives:
        s = p.shape
        if isinstance(s, LineSegment):
            parts.append(f'<line x1="{s.p1[0]}" y1="{fy(s.p1[1])}" x2="{s.p2[0]}" y2="{fy(s.p2[1])}" {style}/>')
        elif isinstance(s, Circle):
            parts.append(f'<circle cx="{s.center[0]}" cy="{fy(s.center[1])}" r="{s.radius}" {style}/>')
        elif isinstance(s, Polyline):
            pts = " ".join(f"{x},{fy(y)}" for x, y in s.points)
            tag = "polygon" if s.closed else "polyline"
            parts.append(f'<{tag} points="{pts}" {style}/>')
    for a in view.annotations:
        for seg in a.witness:
            parts.append(
                f'<line x1="{seg.p1[0]}" y1="{fy(seg.p1[1])}" x2="{seg.p2[0]}" y2="{fy(seg.p2[1])}" '
                'stroke="gray" stroke-width="20"/>'
            )
        ax, ay = a.text_anchor
        parts.append(f'<text x="{ax}" y="{fy(ay) - 60}" font-size="300" text-anchor="middle">{a.value}</text>')
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
