"""Three-view orthographic drawings of a pier design.

A Drawing holds a front, top, and side View.  Each View is a list of
geometric primitives on semantic layers plus dimension annotations that
are linked one-to-one to the primitive they measure.  Construction is a
pure function of the parameter vector, so the same design always yields
byte-identical downstream artifacts.

Conventions (view-local integer mm):

* front: x across the bridge (cap beam spans [0, W]), y up, ground at
  y=0 (bottom of the pile cap); piles drawn below ground.
* top: plan of the cap beam ([0, W] x [0, depth]); the pile row is
  drawn as a detached strip of circles below the plan outline so that
  closed contours never overlap.
* side: along-bridge profile of a single column stack.

Recognition parameters are annotated as dimensions; counting parameters
are carried by primitive multiplicity only (models must count); and
composite parameters never appear in the drawing at all (models must
compute them).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .schema import Kind, ParameterSchema, ParameterVector

# Fixed out-of-plane and detail dimensions (drawing conventions, not
# schema parameters).
PILE_DIAMETER = 800
PILE_EXPOSURE = 2500  # drawn pile length below ground line
CAP_BEAM_DEPTH = 2400
PILE_CAP_DEPTH = 3600
BEARING_WIDTH = 600
BEARING_HEIGHT = 300
PILE_STRIP_GAP = 2000  # top view: offset of the pile row strip below the plan

# Dimension placement: witness lines land this far outside the content
# bounding box, and parallel dimensions stack in tiers.
DIM_OFFSET = 300
DIM_TIER = 250


class ViewId(Enum):
    FRONT = "front"
    TOP = "top"
    SIDE = "side"


class Layer(Enum):
    CAP_BEAM = "CAP_BEAM"
    PIER_COLUMN = "PIER_COLUMN"
    PILE_CAP = "PILE_CAP"
    PILES = "PILES"
    BEARINGS = "BEARINGS"
    DIMENSIONS = "DIMENSIONS"


class DrawingError(Exception):
    pass


class ConflictingAnnotationError(DrawingError):
    def __init__(self, name: str, v1: int, v2: int):
        super().__init__(f"annotation {name} disagrees across views: {v1} != {v2}")
        self.name = name
        self.values = (v1, v2)


Point = tuple[int, int]


@dataclass(frozen=True)
class LineSegment:
    p1: Point
    p2: Point


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: int

    def __post_init__(self):
        if self.radius <= 0:
            raise DrawingError("circle radius must be positive")


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    closed: bool = False

    def __post_init__(self):
        if self.closed:
            if len(self.points) < 3:
                raise DrawingError("closed polyline needs at least 3 points")
            if self.points[0] == self.points[-1]:
                raise DrawingError("closed polyline must not repeat its first point")


Shape = LineSegment | Circle | Polyline


@dataclass(frozen=True)
class Primitive:
    id: str
    shape: Shape
    layer: Layer


@dataclass(frozen=True)
class DimensionAnnotation:
    id: str
    parameter_name: str
    value: int
    target_primitive_id: str
    witness: tuple[LineSegment, LineSegment]
    text_anchor: Point
    view: "ViewId"


def _shape_bounds(shape: Shape) -> tuple[int, int, int, int]:
    if isinstance(shape, LineSegment):
        xs, ys = (shape.p1[0], shape.p2[0]), (shape.p1[1], shape.p2[1])
    elif isinstance(shape, Circle):
        (cx, cy), r = shape.center, shape.radius
        xs, ys = (cx - r, cx + r), (cy - r, cy + r)
    else:
        xs = [p[0] for p in shape.points]
        ys = [p[1] for p in shape.points]
    return min(xs), min(ys), max(xs), max(ys)


def _union(boxes) -> tuple[int, int, int, int]:
    xs0, ys0, xs1, ys1 = zip(*boxes)
    return min(xs0), min(ys0), max(xs1), max(ys1)


@dataclass(frozen=True)
class View:
    view_id: ViewId
    primitives: tuple[Primitive, ...]
    annotations: tuple[DimensionAnnotation, ...]

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        """Bounds of all geometry, annotation leaders included."""
        boxes = [_shape_bounds(p.shape) for p in self.primitives]
        for a in self.annotations:
            boxes.append(_shape_bounds(a.witness[0]))
            boxes.append(_shape_bounds(a.witness[1]))
            boxes.append((a.text_anchor[0], a.text_anchor[1], a.text_anchor[0], a.text_anchor[1]))
        if not boxes:
            raise DrawingError("empty view has no bounding box")
        return _union(boxes)

    def content_bbox(self) -> tuple[int, int, int, int]:
        return _union([_shape_bounds(p.shape) for p in self.primitives])

    def primitive(self, pid: str) -> Primitive:
        for p in self.primitives:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def closed_contours(self, layer: Layer | None = None):
        for p in self.primitives:
            if layer is not None and p.layer is not layer:
                continue
            if isinstance(p.shape, Circle) or (isinstance(p.shape, Polyline) and p.shape.closed):
                yield p


@dataclass(frozen=True)
class Drawing:
    front: View
    top: View
    side: View

    def views(self) -> tuple[View, View, View]:
        return (self.front, self.top, self.side)

    def view(self, view_id: ViewId) -> View:
        return {ViewId.FRONT: self.front, ViewId.TOP: self.top, ViewId.SIDE: self.side}[view_id]


# Which (view, layer) multiplicity carries each counting parameter.
COUNTING_SOURCES = {
    "num_pier_columns": (ViewId.FRONT, Layer.PIER_COLUMN),
    "num_piles": (ViewId.TOP, Layer.PILES),
    "num_bearings": (ViewId.FRONT, Layer.BEARINGS),
}


def _rect(pid: str, layer: Layer, x0: int, y0: int, x1: int, y1: int) -> Primitive:
    pts = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    return Primitive(pid, Polyline(pts, closed=True), layer)


class _Annotator:
    """Stacks dimension leaders in tiers outside the content box."""

    def __init__(self, view_id: ViewId, content_bbox):
        self.view_id = view_id
        self.bbox = content_bbox
        self.anns: list[DimensionAnnotation] = []

    def horizontal(self, name: str, value: int, target: str, x0: int, x1: int, y_feature: int, side: str, tier: int):
        xmin, ymin, xmax, ymax = self.bbox
        y_dim = (ymax + DIM_OFFSET + tier * DIM_TIER) if side == "above" else (ymin - DIM_OFFSET - tier * DIM_TIER)
        w1 = LineSegment((x0, y_feature), (x0, y_dim))
        w2 = LineSegment((x1, y_feature), (x1, y_dim))
        anchor = ((x0 + x1) // 2, y_dim)
        self.anns.append(
            DimensionAnnotation(f"{self.view_id.value}:dim:{name}", name, value, target, (w1, w2), anchor, self.view_id)
        )

    def vertical(self, name: str, value: int, target: str, y0: int, y1: int, x_feature: int, tier: int):
        xmin, ymin, xmax, ymax = self.bbox
        x_dim = xmax + DIM_OFFSET + tier * DIM_TIER
        w1 = LineSegment((x_feature, y0), (x_dim, y0))
        w2 = LineSegment((x_feature, y1), (x_dim, y1))
        anchor = (x_dim, (y0 + y1) // 2)
        self.anns.append(
            DimensionAnnotation(f"{self.view_id.value}:dim:{name}", name, value, target, (w1, w2), anchor, self.view_id)
        )


def pile_centers(v: ParameterVector) -> list[int]:
    w = v["cap_beam_cross_dim"]
    extent = v["pile_row_extent"]
    start = w // 2 - extent // 2
    return [start + j * v["pile_spacing"] for j in range(v["num_piles"])]


def _build_front(v: ParameterVector) -> View:
    w = v["cap_beam_cross_dim"]
    h_cap = v["pile_cap_height"]
    h_col = v["pier_column_height"]
    h_beam = v["cap_beam_height"]
    col = v["pier_column_cross_dim"]
    spacing = v["cross_bridge_pier_spacing"]
    overhang = v["cap_beam_overhang"]
    pitch = v["bearing_pitch"]
    total = v["total_structure_height"]

    prims = []
    centers = pile_centers(v)
    for j, cx in enumerate(centers):
        prims.append(
            _rect(f"front:pile_{j}", Layer.PILES, cx - PILE_DIAMETER // 2, -PILE_EXPOSURE, cx + PILE_DIAMETER // 2, 0)
        )
    prims.append(_rect("front:pile_cap", Layer.PILE_CAP, 0, 0, w, h_cap))
    for i in range(v["num_pier_columns"]):
        x0 = overhang + i * spacing
        prims.append(_rect(f"front:column_{i}", Layer.PIER_COLUMN, x0, h_cap, x0 + col, h_cap + h_col))
    prims.append(_rect("front:cap_beam", Layer.CAP_BEAM, 0, h_cap + h_col, w, total))
    for k in range(1, v["num_bearings"] + 1):
        cx = k * pitch
        prims.append(
            _rect(
                f"front:bearing_{k - 1}",
                Layer.BEARINGS,
                cx - BEARING_WIDTH // 2,
                total,
                cx + BEARING_WIDTH // 2,
                total + BEARING_HEIGHT,
            )
        )

    content = _union([_shape_bounds(p.shape) for p in prims])
    ann = _Annotator(ViewId.FRONT, content)
    ann.horizontal("cap_beam_cross_dim", w, "front:cap_beam", 0, w, total, "above", 0)
    ann.horizontal("pile_spacing", v["pile_spacing"], "front:pile_0", centers[0], centers[1], -PILE_EXPOSURE, "below", 0)
    ann.horizontal("pier_column_cross_dim", col, "front:column_0", overhang, overhang + col, h_cap, "below", 1)
    last_col_right = overhang + (v["num_pier_columns"] - 1) * spacing + col
    ann.vertical("pile_cap_height", h_cap, "front:pile_cap", 0, h_cap, w, 0)
    ann.vertical("pier_column_height", h_col, f"front:column_{v['num_pier_columns'] - 1}", h_cap, h_cap + h_col, last_col_right, 0)
    ann.vertical("cap_beam_height", h_beam, "front:cap_beam", h_cap + h_col, total, w, 0)
    return View(ViewId.FRONT, tuple(prims), tuple(ann.anns))


def _build_top(v: ParameterVector) -> View:
    w = v["cap_beam_cross_dim"]
    prims = [_rect("top:cap_beam", Layer.CAP_BEAM, 0, 0, w, CAP_BEAM_DEPTH)]
    centers = pile_centers(v)
    cy = -PILE_STRIP_GAP
    for j, cx in enumerate(centers):
        prims.append(Primitive(f"top:pile_{j}", Circle((cx, cy), PILE_DIAMETER // 2), Layer.PILES))

    content = _union([_shape_bounds(p.shape) for p in prims])
    ann = _Annotator(ViewId.TOP, content)
    ann.horizontal("cap_beam_cross_dim", w, "top:cap_beam", 0, w, CAP_BEAM_DEPTH, "above", 0)
    ann.horizontal("pile_spacing", v["pile_spacing"], "top:pile_0", centers[0], centers[1], cy - PILE_DIAMETER // 2, "below", 0)
    return View(ViewId.TOP, tuple(prims), tuple(ann.anns))


def _build_side(v: ParameterVector) -> View:
    h_cap = v["pile_cap_height"]
    h_col = v["pier_column_height"]
    h_beam = v["cap_beam_height"]
    col = v["pier_column_cross_dim"]
    total = v["total_structure_height"]
    mid = PILE_CAP_DEPTH // 2

    prims = [
        _rect("side:pile_0", Layer.PILES, mid - PILE_DIAMETER // 2, -PILE_EXPOSURE, mid + PILE_DIAMETER // 2, 0),
        _rect("side:pile_cap", Layer.PILE_CAP, 0, 0, PILE_CAP_DEPTH, h_cap),
        _rect("side:column_0", Layer.PIER_COLUMN, mid - col // 2, h_cap, mid + col // 2, h_cap + h_col),
        _rect(
            "side:cap_beam",
            Layer.CAP_BEAM,
            mid - CAP_BEAM_DEPTH // 2,
            h_cap + h_col,
            mid + CAP_BEAM_DEPTH // 2,
            total,
        ),
        _rect(
            "side:bearing_0",
            Layer.BEARINGS,
            mid - BEARING_WIDTH // 2,
            total,
            mid + BEARING_WIDTH // 2,
            total + BEARING_HEIGHT,
        ),
    ]

    content = _union([_shape_bounds(p.shape) for p in prims])
    ann = _Annotator(ViewId.SIDE, content)
    ann.vertical("pile_cap_height", h_cap, "side:pile_cap", 0, h_cap, PILE_CAP_DEPTH, 0)
    ann.vertical("pier_column_height", h_col, "side:column_0", h_cap, h_cap + h_col, mid + col // 2, 0)
    ann.vertical("cap_beam_height", h_beam, "side:cap_beam", h_cap + h_col, total, mid + CAP_BEAM_DEPTH // 2, 0)
    return View(ViewId.SIDE, tuple(prims), tuple(ann.anns))


def build_views(v: ParameterVector) -> Drawing:
    """Construct the three annotated orthographic views for a design."""
    return Drawing(front=_build_front(v), top=_build_top(v), side=_build_side(v))


def count_layer(d: Drawing, layer: Layer, view: ViewId) -> int:
    """Number of closed contours (rectangles or circles) on a layer."""
    return sum(1 for _ in d.view(view).closed_contours(layer))


def extract_annotations(d: Drawing) -> dict[str, int]:
    """Recover all non-composite parameters from a drawing.

    Recognition values come from dimension annotations (first view wins,
    but duplicated annotations must agree); counting values come from
    primitive multiplicity on the designated layer.
    """
    out: dict[str, int] = {}
    for view in d.views():
        for a in view.annotations:
            if a.parameter_name in out:
                if out[a.parameter_name] != a.value:
                    raise ConflictingAnnotationError(a.parameter_name, out[a.parameter_name], a.value)
            else:
                out[a.parameter_name] = a.value
    for name, (view_id, layer) in COUNTING_SOURCES.items():
        out[name] = count_layer(d, layer, view_id)
    return out


def annotated_names(schema: ParameterSchema) -> list[str]:
    """Names recoverable from a drawing (everything but composites)."""
    return schema.names_of_kind(Kind.RECOGNITION) + schema.names_of_kind(Kind.COUNTING)
