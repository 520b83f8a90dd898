"""Deterministic PNG rendering of drawing views.

Geometry is fit into the pixel frame with a uniform scale (aspect
preserved) inside a configurable margin; strokes are black on white.
Dimension text is drawn with a built-in stroke font (digits only), so
rendering needs no font files and is byte-reproducible everywhere.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from .drawing import Circle, DimensionAnnotation, LineSegment, Polyline, View


class DegenerateBoundsError(Exception):
    """View content collapses to a single point; no scale exists."""


@dataclass(frozen=True)
class RasterConfig:
    width_px: int = 1600
    height_px: int = 1200
    stroke_width_px: int = 2
    margin_fraction: float = 0.05

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("raster dimensions must be positive")
        if not 0 <= self.margin_fraction < 0.5:
            raise ValueError("margin_fraction must be in [0, 0.5)")


# Stroke font: per glyph, a list of polylines in a 2x4 box (y up).
_GLYPHS: dict[str, list[list[tuple[float, float]]]] = {
    "0": [[(0, 0), (2, 0), (2, 4), (0, 4), (0, 0)]],
    "1": [[(1, 0), (1, 4)], [(0.5, 3.2), (1, 4)]],
    "2": [[(0, 4), (2, 4), (2, 2), (0, 2), (0, 0), (2, 0)]],
    "3": [[(0, 4), (2, 4), (2, 0), (0, 0)], [(0.6, 2), (2, 2)]],
    "4": [[(0, 4), (0, 2), (2, 2)], [(2, 4), (2, 0)]],
    "5": [[(2, 4), (0, 4), (0, 2), (2, 2), (2, 0), (0, 0)]],
    "6": [[(2, 4), (0, 4), (0, 0), (2, 0), (2, 2), (0, 2)]],
    "7": [[(0, 4), (2, 4), (1, 0)]],
    "8": [[(0, 0), (2, 0), (2, 4), (0, 4), (0, 0)], [(0, 2), (2, 2)]],
    "9": [[(0, 0), (2, 0), (2, 4), (0, 4), (0, 2), (2, 2)]],
    "-": [[(0, 2), (2, 2)]],
}
_GLYPH_W, _GLYPH_H = 2.0, 4.0


class _Frame:
    """mm -> pixel transform: uniform scale, centered, y flipped."""

    def __init__(self, bbox, cfg: RasterConfig):
        xmin, ymin, xmax, ymax = bbox
        w, h = xmax - xmin, ymax - ymin
        if w == 0 and h == 0:
            raise DegenerateBoundsError("view bounding box has zero extent")
        avail_w = cfg.width_px * (1 - 2 * cfg.margin_fraction)
        avail_h = cfg.height_px * (1 - 2 * cfg.margin_fraction)
        scales = []
        if w > 0:
            scales.append(avail_w / w)
        if h > 0:
            scales.append(avail_h / h)
        self.scale = min(scales)
        self.cx, self.cy = (xmin + xmax) / 2, (ymin + ymax) / 2
        self.px_cx, self.px_cy = cfg.width_px / 2, cfg.height_px / 2

    def to_px(self, p) -> tuple[float, float]:
        x = self.px_cx + (p[0] - self.cx) * self.scale
        y = self.px_cy - (p[1] - self.cy) * self.scale
        return (x, y)


def _draw_text(draw: ImageDraw.ImageDraw, text: str, anchor_px, size_px: float, width: int):
    """Centered stroke-font text just above the anchor point."""
    sy = size_px / _GLYPH_H
    advance = (_GLYPH_W + 1.0) * sy
    total_w = advance * len(text) - 1.0 * sy
    x0 = anchor_px[0] - total_w / 2
    y_base = anchor_px[1] - 0.3 * size_px  # sit the glyphs above the dimension line
    for i, ch in enumerate(text):
        strokes = _GLYPHS.get(ch)
        if strokes is None:
            continue
        gx = x0 + i * advance
        for poly in strokes:
            pts = [(gx + px * sy, y_base - py * sy) for px, py in poly]
            draw.line(pts, fill=0, width=width)


def _draw_annotation(draw, frame, a: DimensionAnnotation, label: str, cfg: RasterConfig):
    thin = max(1, cfg.stroke_width_px - 1)
    for seg in a.witness:
        draw.line([frame.to_px(seg.p1), frame.to_px(seg.p2)], fill=0, width=thin)
    # measure line between the witness feet (the outer endpoints)
    draw.line([frame.to_px(a.witness[0].p2), frame.to_px(a.witness[1].p2)], fill=0, width=thin)
    size_px = max(8.0, 250 * frame.scale)
    _draw_text(draw, label, frame.to_px(a.text_anchor), size_px, thin)


def render(view: View, cfg: RasterConfig | None = None, labels: dict[str, str] | None = None) -> Image.Image:
    """Render a view to a grayscale image.

    `labels` optionally overrides the text drawn for an annotation,
    keyed by parameter name (used for name-tag reference renders).
    """
    cfg = cfg or RasterConfig()
    frame = _Frame(view.bbox, cfg)
    img = Image.new("L", (cfg.width_px, cfg.height_px), 255)
    draw = ImageDraw.Draw(img)
    for p in view.primitives:
        shape = p.shape
        if isinstance(shape, LineSegment):
            draw.line([frame.to_px(shape.p1), frame.to_px(shape.p2)], fill=0, width=cfg.stroke_width_px)
        elif isinstance(shape, Circle):
            (cx, cy), r = shape.center, shape.radius
            p0 = frame.to_px((cx - r, cy + r))
            p1 = frame.to_px((cx + r, cy - r))
            draw.ellipse([p0, p1], outline=0, width=cfg.stroke_width_px)
        elif isinstance(shape, Polyline):
            pts = [frame.to_px(q) for q in shape.points]
            if shape.closed:
                pts.append(pts[0])
            draw.line(pts, fill=0, width=cfg.stroke_width_px)
    for a in view.annotations:
        label = labels.get(a.parameter_name, str(a.value)) if labels else str(a.value)
        _draw_annotation(draw, frame, a, label, cfg)
    return img


def rasterize(view: View, cfg: RasterConfig | None = None, labels: dict[str, str] | None = None) -> tuple[np.ndarray, bytes]:
    """Pixel grid and deterministic PNG bytes for one view."""
    img = render(view, cfg, labels)
    buf = io.BytesIO()
    img.save(buf, format="PNG", compress_level=6)
    return np.asarray(img), buf.getvalue()
