"""Minimal ASCII DXF emission and parsing.

The dialect is a small, self-consistent subset of DXF: HEADER (with the
view name in $PROJECTNAME), a TABLES section declaring the six semantic
layers, and an ENTITIES section of LINE / CIRCLE / LWPOLYLINE / TEXT.
Coordinates are integer millimeters and output is byte-deterministic.

Dimension annotations serialize as two witness LINEs followed by one
TEXT on the DIMENSIONS layer.  The TEXT content carries the semantic
link the drawing model guarantees: "<parameter>=<value>;<target-id>".
Entity handles (group 5) carry primitive ids so parsing reconstructs
the drawing exactly, up to primitive ordering.

The parser accepts group codes in any order within an entity (repeated
vertex codes keep their sequence) but requires the dialect's entity
ordering for annotations: witness lines directly precede their TEXT.
"""

from __future__ import annotations

from .drawing import (
    Circle,
    DimensionAnnotation,
    Drawing,
    Layer,
    LineSegment,
    Point,
    Polyline,
    Primitive,
    View,
    ViewId,
)

TEXT_HEIGHT = 250


class MalformedDxfError(Exception):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnsupportedEntityError(Exception):
    def __init__(self, entity_type: str):
        super().__init__(f"unsupported DXF entity: {entity_type}")
        self.entity_type = entity_type


# -- Writer -------------------------------------------------------------------


def _tag(code: int, value) -> list[str]:
    return [str(code), str(value)]


def _layer_table() -> list[str]:
    out = _tag(0, "TABLE") + _tag(2, "LAYER") + _tag(70, len(Layer))
    for layer in Layer:
        out += _tag(0, "LAYER") + _tag(2, layer.value) + _tag(70, 0) + _tag(62, 7) + _tag(6, "CONTINUOUS")
    out += _tag(0, "ENDTAB")
    return out


def _emit_line(seg: LineSegment, layer: str, handle: str) -> list[str]:
    out = _tag(0, "LINE") + _tag(5, handle) + _tag(8, layer)
    out += _tag(10, seg.p1[0]) + _tag(20, seg.p1[1])
    out += _tag(11, seg.p2[0]) + _tag(21, seg.p2[1])
    return out


def _emit_entity(p: Primitive) -> list[str]:
    shape = p.shape
    if isinstance(shape, LineSegment):
        return _emit_line(shape, p.layer.value, p.id)
    if isinstance(shape, Circle):
        out = _tag(0, "CIRCLE") + _tag(5, p.id) + _tag(8, p.layer.value)
        out += _tag(10, shape.center[0]) + _tag(20, shape.center[1]) + _tag(40, shape.radius)
        return out
    out = _tag(0, "LWPOLYLINE") + _tag(5, p.id) + _tag(8, p.layer.value)
    out += _tag(90, len(shape.points)) + _tag(70, 1 if shape.closed else 0)
    for x, y in shape.points:
        out += _tag(10, x) + _tag(20, y)
    return out


def _emit_annotation(a: DimensionAnnotation) -> list[str]:
    out = _emit_line(a.witness[0], Layer.DIMENSIONS.value, f"{a.id}:w1")
    out += _emit_line(a.witness[1], Layer.DIMENSIONS.value, f"{a.id}:w2")
    out += _tag(0, "TEXT") + _tag(5, a.id) + _tag(8, Layer.DIMENSIONS.value)
    out += _tag(10, a.text_anchor[0]) + _tag(20, a.text_anchor[1])
    out += _tag(40, TEXT_HEIGHT)
    out += _tag(1, f"{a.parameter_name}={a.value};{a.target_primitive_id}")
    return out


def write_view_dxf(view: View) -> bytes:
    lines: list[str] = []
    lines += _tag(0, "SECTION") + _tag(2, "HEADER")
    lines += _tag(9, "$ACADVER") + _tag(1, "AC1009")
    lines += _tag(9, "$INSUNITS") + _tag(70, 4)  # millimeters
    lines += _tag(9, "$PROJECTNAME") + _tag(1, view.view_id.value)
    lines += _tag(0, "ENDSEC")
    lines += _tag(0, "SECTION") + _tag(2, "TABLES") + _layer_table() + _tag(0, "ENDSEC")
    lines += _tag(0, "SECTION") + _tag(2, "ENTITIES")
    for p in view.primitives:
        lines += _emit_entity(p)
    for a in view.annotations:
        lines += _emit_annotation(a)
    lines += _tag(0, "ENDSEC") + _tag(0, "EOF")
    return ("\n".join(lines) + "\n").encode("ascii")


def write_dxf(d: Drawing, view: ViewId) -> bytes:
    """Serialize one view of a drawing to ASCII DXF."""
    return write_view_dxf(d.view(view))


# -- Parser -------------------------------------------------------------------


def _tokenize(data: bytes) -> list[tuple[int, int, str]]:
    """Split into (line_number, group_code, value) triples."""
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise MalformedDxfError(0, f"not ASCII: {exc}") from None
    raw = text.split("\n")
    if raw and raw[-1] == "":
        raw.pop()
    if len(raw) % 2 != 0:
        raise MalformedDxfError(len(raw), "truncated: dangling group code without value")
    out = []
    for i in range(0, len(raw), 2):
        code_line = raw[i].strip()
        try:
            code = int(code_line)
        except ValueError:
            raise MalformedDxfError(i + 1, f"group code is not an integer: {code_line!r}") from None
        out.append((i + 1, code, raw[i + 1].strip()))
    return out


def _as_int(lineno: int, value: str) -> int:
    try:
        f = float(value)
    except ValueError:
        raise MalformedDxfError(lineno, f"not a number: {value!r}") from None
    i = int(round(f))
    if f != i:
        raise MalformedDxfError(lineno, f"non-integer coordinate: {value!r}")
    return i


def _split_sections(tokens) -> list[tuple[str, int, int]]:
    """Return (name, body_start, body_end) per section; validates EOF."""
    sections = []
    pos = 0
    eof_seen = False
    while pos < len(tokens):
        lineno, code, value = tokens[pos]
        if code == 0 and value == "EOF":
            eof_seen = True
            if pos + 1 != len(tokens):
                raise MalformedDxfError(tokens[pos + 1][0], "content after EOF")
            break
        if not (code == 0 and value == "SECTION"):
            raise MalformedDxfError(lineno, f"expected SECTION, got ({code}, {value!r})")
        if pos + 1 >= len(tokens) or tokens[pos + 1][1] != 2:
            raise MalformedDxfError(lineno, "SECTION without name")
        name = tokens[pos + 1][2]
        body_start = pos + 2
        depth = 0
        end = None
        for i in range(body_start, len(tokens)):
            _, c, v = tokens[i]
            if c == 0 and v == "SECTION":
                depth += 1
            elif c == 0 and v == "ENDSEC":
                if depth == 0:
                    end = i
                    break
                depth -= 1
        if end is None:
            raise MalformedDxfError(tokens[-1][0], f"unterminated {name} SECTION")
        sections.append((name, body_start, end))
        pos = end + 1
    if not eof_seen:
        raise MalformedDxfError(tokens[-1][0] if tokens else 0, "missing EOF sentinel")
    return sections


def _header_view(tokens, start, end) -> ViewId | None:
    for i in range(start, end):
        lineno, code, value = tokens[i]
        if code == 9 and value == "$PROJECTNAME" and i + 1 < end and tokens[i + 1][1] == 1:
            name = tokens[i + 1][2]
            try:
                return ViewId(name)
            except ValueError:
                raise MalformedDxfError(tokens[i + 1][0], f"unknown view id {name!r}") from None
    return None


def _table_layers(tokens, start, end) -> set[str]:
    layers = set()
    expecting_name = False
    for i in range(start, end):
        _, code, value = tokens[i]
        if code == 0 and value == "LAYER":
            expecting_name = True
        elif code == 2 and expecting_name:
            layers.add(value)
            expecting_name = False
    return layers


_SUPPORTED = {"LINE", "CIRCLE", "LWPOLYLINE", "TEXT"}


class _Entity:
    def __init__(self, etype: str, lineno: int):
        self.etype = etype
        self.lineno = lineno
        self.fields: dict[int, str] = {}
        self.vertices: list[list[int | None]] = []  # LWPOLYLINE 10/20 pairs in order

    def add(self, lineno: int, code: int, value: str):
        if self.etype == "LWPOLYLINE" and code in (10, 20):
            if code == 10:
                self.vertices.append([_as_int(lineno, value), None])
            else:
                if not self.vertices or self.vertices[-1][1] is not None:
                    raise MalformedDxfError(lineno, "vertex y without preceding x")
                self.vertices[-1][1] = _as_int(lineno, value)
        else:
            self.fields[code] = value

    def require(self, code: int) -> str:
        if code not in self.fields:
            raise MalformedDxfError(self.lineno, f"{self.etype} missing group {code}")
        return self.fields[code]

    def point(self, xcode: int, ycode: int) -> Point:
        return (_as_int(self.lineno, self.require(xcode)), _as_int(self.lineno, self.require(ycode)))


def _entity_to_primitive(e: _Entity) -> Primitive:
    try:
        layer = Layer(e.require(8))
    except ValueError:
        raise MalformedDxfError(e.lineno, f"unknown layer {e.fields.get(8)!r}") from None
    pid = e.fields.get(5, "")
    if e.etype == "LINE":
        return Primitive(pid, LineSegment(e.point(10, 20), e.point(11, 21)), layer)
    if e.etype == "CIRCLE":
        return Primitive(pid, Circle(e.point(10, 20), _as_int(e.lineno, e.require(40))), layer)
    count = _as_int(e.lineno, e.require(90))
    if count != len(e.vertices) or any(v[1] is None for v in e.vertices):
        raise MalformedDxfError(e.lineno, "LWPOLYLINE vertex count mismatch")
    closed = _as_int(e.lineno, e.fields.get(70, "0")) & 1 == 1
    return Primitive(pid, Polyline(tuple((v[0], v[1]) for v in e.vertices), closed), layer)


def _text_to_annotation(e: _Entity, pending: list[Primitive], view_id: ViewId) -> DimensionAnnotation:
    content = e.require(1)
    try:
        head, target = content.rsplit(";", 1)
        name, value = head.split("=", 1)
        ivalue = int(value)
    except ValueError:
        raise MalformedDxfError(e.lineno, f"annotation text not in name=value;target form: {content!r}") from None
    if len(pending) < 2:
        raise MalformedDxfError(e.lineno, "annotation TEXT without two preceding witness lines")
    w2 = pending.pop()
    w1 = pending.pop()
    return DimensionAnnotation(
        id=e.fields.get(5, f"{view_id.value}:dim:{name}"),
        parameter_name=name,
        value=ivalue,
        target_primitive_id=target,
        witness=(w1.shape, w2.shape),
        text_anchor=e.point(10, 20),
        view=view_id,
    )


def parse_dxf(data: bytes) -> View:
    """Parse a DXF stream in the dialect produced by write_dxf."""
    tokens = _tokenize(data)
    sections = dict((name, (s, e)) for name, s, e in _split_sections(tokens))
    if "HEADER" not in sections:
        raise MalformedDxfError(0, "missing HEADER section")
    if "ENTITIES" not in sections:
        raise MalformedDxfError(0, "missing ENTITIES section")
    view_id = _header_view(tokens, *sections["HEADER"])
    if view_id is None:
        raise MalformedDxfError(0, "missing $PROJECTNAME header variable (view id)")
    declared = _table_layers(tokens, *sections["TABLES"]) if "TABLES" in sections else set()

    primitives: list[Primitive] = []
    annotations: list[DimensionAnnotation] = []
    pending: list[Primitive] = []
    entity: _Entity | None = None

    def flush(e: _Entity):
        if e.etype == "TEXT":
            annotations.append(_text_to_annotation(e, pending, view_id))
            return
        p = _entity_to_primitive(e)
        if p.layer is Layer.DIMENSIONS and isinstance(p.shape, LineSegment):
            pending.append(p)  # witness line, claimed by the next TEXT
        else:
            primitives.append(p)

    start, end = sections["ENTITIES"]
    for i in range(start, end):
        lineno, code, value = tokens[i]
        if code == 0:
            if entity is not None:
                flush(entity)
            if value not in _SUPPORTED:
                raise UnsupportedEntityError(value)
            entity = _Entity(value, lineno)
        else:
            if entity is None:
                raise MalformedDxfError(lineno, "data outside any entity")
            entity.add(lineno, code, value)
    if entity is not None:
        flush(entity)
    if pending:
        raise MalformedDxfError(0, "witness lines not claimed by any annotation TEXT")

    for p in primitives:
        if declared and p.layer.value not in declared:
            raise MalformedDxfError(0, f"entity on undeclared layer {p.layer.value}")
    return View(view_id, tuple(primitives), tuple(annotations))


def parse_drawing(front: bytes, top: bytes, side: bytes) -> Drawing:
    """Assemble a Drawing from the three per-view DXF streams."""
    views = {}
    for data in (front, top, side):
        view = parse_dxf(data)
        views[view.view_id] = view
    missing = {v for v in ViewId} - set(views)
    if missing:
        raise MalformedDxfError(0, f"missing views: {sorted(v.value for v in missing)}")
    return Drawing(front=views[ViewId.FRONT], top=views[ViewId.TOP], side=views[ViewId.SIDE])


# -- Structural check ---------------------------------------------------------

_SECTION_ORDER = ["HEADER", "TABLES", "ENTITIES"]


def check_dxf_structure(data: bytes) -> list[str]:
    """ISO-style structural issues: section balance, EOF, layer closure."""
    issues: list[str] = []
    try:
        tokens = _tokenize(data)
        sections = _split_sections(tokens)
    except MalformedDxfError as exc:
        return [str(exc)]
    names = [name for name, _, _ in sections]
    for required in _SECTION_ORDER:
        if required not in names:
            issues.append(f"missing {required} section")
    known = [n for n in names if n in _SECTION_ORDER]
    if known != sorted(known, key=_SECTION_ORDER.index):
        issues.append(f"sections out of order: {names}")
    declared: set[str] = set()
    used: set[str] = set()
    for name, start, end in sections:
        if name == "TABLES":
            declared = _table_layers(tokens, start, end)
        elif name == "ENTITIES":
            for i in range(start, end):
                _, code, value = tokens[i]
                if code == 8:
                    used.add(value)
    for layer in sorted(used - declared):
        issues.append(f"entity references undeclared layer {layer}")
    return issues
