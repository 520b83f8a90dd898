"""ISO 10303-21 writer for solid assemblies, plus a structural validator.

Each solid becomes one MANIFOLD_SOLID_BREP whose shell is built from
the shared topology in `brep`: planar and cylindrical ADVANCED_FACEs
with explicit edge loops, vertices, and curves.  Entity ids are
assigned in construction order, so identical assemblies produce
byte-identical files.

The validator is a self-contained Part-21 tokenizer: it checks the
ISO-10303-21 envelope, section order, record syntax in DATA, unique
definition of every #id, and closure of every #id reference.  It knows
nothing about the writer's entity choices, so it can serve as an
independent check on emitted files.
"""

from __future__ import annotations

import re

from .brep import ShellTopology, solid_topology
from .solids import PlacedBox, PlacedCylinder, SolidAssembly

# fixed so output never depends on wall-clock time
_FILE_STAMP = "2026-01-01T00:00:00"


def _real(v) -> str:
    s = f"{float(v):.1f}"
    return s[:-2] + "." if s.endswith(".0") else s


def _xyz(p) -> str:
    return f"({_real(p[0])},{_real(p[1])},{_real(p[2])})"


class _Part21Writer:
    def __init__(self):
        self.records: list[str] = []

    def add(self, body: str) -> int:
        eid = len(self.records) + 1
        self.records.append(f"#{eid}={body};")
        return eid

    def point(self, p) -> int:
        return self.add(f"CARTESIAN_POINT('',{_xyz(p)})")

    def direction(self, d) -> int:
        return self.add(f"DIRECTION('',{_xyz(d)})")

    def placement(self, origin, axis, ref) -> int:
        cp = self.point(origin)
        ax = self.direction(axis)
        rf = self.direction(ref)
        return self.add(f"AXIS2_PLACEMENT_3D('',#{cp},#{ax},#{rf})")


_PERP_REF = {0: (0, 1, 0), 1: (0, 0, 1), 2: (1, 0, 0)}


def _perpendicular(normal) -> tuple[int, int, int]:
    for i, c in enumerate(normal):
        if c != 0:
            return _PERP_REF[i]
    raise ValueError("zero normal")


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _unit_and_length(vec) -> tuple[tuple[int, int, int], int]:
    length = sum(abs(c) for c in vec)  # axis-aligned edges only
    return tuple(0 if c == 0 else (1 if c > 0 else -1) for c in vec), length


def _emit_shell(w: _Part21Writer, topo: ShellTopology, solid) -> int:
    vertex_points = []
    for p in topo.vertices:
        cp = w.point(p)
        vertex_points.append(w.add(f"VERTEX_POINT('',#{cp})"))

    if isinstance(solid, PlacedCylinder):
        axis_idx = "xyz".index(solid.axis)
        axis_vec = tuple(1 if i == axis_idx else 0 for i in range(3))
        ref_vec = _perpendicular(axis_vec)
        bottom_center = solid.base_center
        top_center = tuple(
            c + (solid.height if i == axis_idx else 0) for i, c in enumerate(solid.base_center)
        )
        circle_centers = {0: bottom_center, 1: top_center}

    edge_curves = []
    for eidx, (a, b, curve) in enumerate(topo.edges):
        if curve == "line":
            direction, length = _unit_and_length(_sub(topo.vertices[b], topo.vertices[a]))
            dir_id = w.direction(direction)
            vec = w.add(f"VECTOR('',#{dir_id},{_real(length)})")
            start = w.point(topo.vertices[a])
            line = w.add(f"LINE('',#{start},#{vec})")
            geometry = line
        else:
            plc = w.placement(circle_centers[eidx], axis_vec, ref_vec)
            geometry = w.add(f"CIRCLE('',#{plc},{_real(solid.radius)})")
        edge_curves.append(
            w.add(f"EDGE_CURVE('',#{vertex_points[a]},#{vertex_points[b]},#{geometry},.T.)")
        )

    face_ids = []
    for face in topo.faces:
        oriented = []
        for edge_index, forward in face.loop:
            flag = ".T." if forward else ".F."
            oriented.append(w.add(f"ORIENTED_EDGE('',*,*,#{edge_curves[edge_index]},{flag})"))
        loop = w.add("EDGE_LOOP('',({}))".format(",".join(f"#{i}" for i in oriented)))
        bound = w.add(f"FACE_OUTER_BOUND('',#{loop},.T.)")
        if face.surface == "plane":
            first_edge = topo.edges[face.loop[0][0]]
            if isinstance(solid, PlacedCylinder):
                on_face = circle_centers[face.loop[0][0]]
            else:
                on_face = topo.vertices[first_edge[0]]
            plc = w.placement(on_face, face.normal, _perpendicular(face.normal))
            surf = w.add(f"PLANE('',#{plc})")
        else:
            plc = w.placement(solid.base_center, axis_vec, ref_vec)
            surf = w.add(f"CYLINDRICAL_SURFACE('',#{plc},{_real(solid.radius)})")
        face_ids.append(w.add(f"ADVANCED_FACE('',(#{bound}),#{surf},.T.)"))

    shell = w.add("CLOSED_SHELL('',({}))".format(",".join(f"#{i}" for i in face_ids)))
    return w.add(f"MANIFOLD_SOLID_BREP('{topo.name}',#{shell})")


def write_step(assembly: SolidAssembly, name: str = "pier") -> bytes:
    """Serialize an assembly to a Part-21 file with deterministic ids."""
    w = _Part21Writer()
    solid_ids = [_emit_shell(w, solid_topology(s), s) for s in assembly.solids]
    ctx = w.add("REPRESENTATION_CONTEXT('assembly','3D')")
    w.add(
        "ADVANCED_BREP_SHAPE_REPRESENTATION('{}',({}),#{})".format(
            name, ",".join(f"#{i}" for i in solid_ids), ctx
        )
    )
    header = [
        "ISO-10303-21;",
        "HEADER;",
        "FILE_DESCRIPTION(('prefabricated pier solid assembly'),'2;1');",
        f"FILE_NAME('{name}.step','{_FILE_STAMP}',(''),(''),'piercad','piercad','');",
        "FILE_SCHEMA(('CONFIG_CONTROL_DESIGN'));",
        "ENDSEC;",
        "DATA;",
    ]
    footer = ["ENDSEC;", "END-ISO-10303-21;"]
    return ("\n".join(header + w.records + footer) + "\n").encode("ascii")


# -- Structural validation ----------------------------------------------------

_DEF_RE = re.compile(r"^#(\d+)\s*=")
_REF_RE = re.compile(r"#(\d+)")


def _strip_strings_and_comments(text: str) -> tuple[str, list[str]]:
    """Blank out 'strings' and /* comments */ so #refs inside them are ignored."""
    issues = []
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "'":
            j = i + 1
            while j < n:
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":  # escaped quote
                        j += 2
                        continue
                    break
                j += 1
            if j >= n:
                issues.append("unterminated string literal")
                break
            out.append(" " * (j - i + 1))
            i = j + 1
        elif ch == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j < 0:
                issues.append("unterminated comment")
                break
            out.append(" " * (j + 2 - i))
            i = j + 2
        else:
            out.append(ch)
            i += 1
    return "".join(out), issues


def validate_part21(data: bytes) -> list[str]:
    """Structural issues in a Part-21 stream; empty list means valid."""
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        return ["file is not ASCII"]
    clean, issues = _strip_strings_and_comments(text)
    if issues:
        return issues
    records = [r.strip() for r in clean.split(";")]
    if records and records[-1] == "":
        records.pop()
    records = [r for r in records if r != ""]
    if not records or records[0] != "ISO-10303-21":
        issues.append("missing ISO-10303-21 start marker")
        return issues
    if records[-1] != "END-ISO-10303-21":
        issues.append("missing END-ISO-10303-21 terminator")

    # section envelope: HEADER ... ENDSEC DATA ... ENDSEC
    try:
        h = records.index("HEADER")
        h_end = records.index("ENDSEC", h)
        d = records.index("DATA", h_end)
        d_end = records.index("ENDSEC", d)
    except ValueError:
        issues.append("HEADER/DATA section envelope incomplete or out of order")
        return issues
    if not (h < h_end < d < d_end):
        issues.append("sections out of order")
    header_records = records[h + 1 : h_end]
    names = [r.split("(", 1)[0].strip() for r in header_records]
    if names[:3] != ["FILE_DESCRIPTION", "FILE_NAME", "FILE_SCHEMA"]:
        issues.append(f"header must open with FILE_DESCRIPTION, FILE_NAME, FILE_SCHEMA; got {names[:3]}")

    defined: set[int] = set()
    referenced: set[int] = set()
    for rec in records[d + 1 : d_end]:
        m = _DEF_RE.match(rec)
        if not m:
            issues.append(f"DATA record is not an instance definition: {rec[:40]!r}")
            continue
        eid = int(m.group(1))
        if eid in defined:
            issues.append(f"#{eid} defined more than once")
        defined.add(eid)
        body = rec[m.end() :]
        referenced.update(int(r) for r in _REF_RE.findall(body))
    for eid in sorted(referenced - defined):
        issues.append(f"#{eid} referenced but never defined")
    return issues
