"""Boundary-representation topology for the two solid kinds.

Boxes carry the classic 8/12/6 vertex/edge/face shell.  Cylinders use
the seam decomposition: two vertices (bottom/top of the seam), three
edges (two circles plus the seam line), and three faces (two planar
caps plus the cylindrical wall, whose loop traverses the seam twice).
Both shells are closed: V - E + F = 2 and every edge is used by exactly
two face-loop entries.

The same topology feeds the structural dump (JSON) and the STEP writer,
so the two 3D modalities can never drift apart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .solids import PlacedBox, PlacedCylinder, Solid, SolidAssembly

XYZ = tuple[int, int, int]


@dataclass(frozen=True)
class Face:
    surface: str  # "plane" or "cylinder"
    # face loop as (edge_index, forward?) pairs, outward-oriented
    loop: tuple[tuple[int, bool], ...]
    normal: tuple[int, int, int] | None = None  # planes only


@dataclass(frozen=True)
class ShellTopology:
    name: str
    kind: str  # "box" or "cylinder"
    vertices: tuple[XYZ, ...]
    # (v_start, v_end, curve) with curve "line" or "circle"; circles are
    # closed so v_start == v_end
    edges: tuple[tuple[int, int, str], ...]
    faces: tuple[Face, ...]

    @property
    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def edge_use_counts(self) -> list[int]:
        counts = [0] * len(self.edges)
        for f in self.faces:
            for edge_index, _fwd in f.loop:
                counts[edge_index] += 1
        return counts

    @property
    def watertight(self) -> bool:
        return all(c == 2 for c in self.edge_use_counts())


# Box corner i has coordinates (ix, iy, iz) bits of i; loops are CCW
# seen from outside the box.
_BOX_FACE_LOOPS = {
    (0, 0, -1): (0, 2, 3, 1),
    (0, 0, 1): (4, 5, 7, 6),
    (-1, 0, 0): (0, 4, 6, 2),
    (1, 0, 0): (1, 3, 7, 5),
    (0, -1, 0): (0, 1, 5, 4),
    (0, 1, 0): (2, 6, 7, 3),
}


def box_topology(box: PlacedBox) -> ShellTopology:
    (x0, y0, z0), (w, d, h) = box.origin, box.extents
    corners = tuple(
        (x0 + (i & 1) * w, y0 + ((i >> 1) & 1) * d, z0 + ((i >> 2) & 1) * h) for i in range(8)
    )
    edge_pairs: list[tuple[int, int]] = []
    edge_index: dict[tuple[int, int], int] = {}
    faces = []
    for normal, corner_loop in _BOX_FACE_LOOPS.items():
        loop = []
        for k in range(4):
            a, b = corner_loop[k], corner_loop[(k + 1) % 4]
            key = (min(a, b), max(a, b))
            if key not in edge_index:
                edge_index[key] = len(edge_pairs)
                edge_pairs.append(key)
            loop.append((edge_index[key], (a, b) == key))
        faces.append(Face("plane", tuple(loop), normal))
    edges = tuple((a, b, "line") for a, b in edge_pairs)
    return ShellTopology(box.name, "box", corners, edges, tuple(faces))


def cylinder_topology(cyl: PlacedCylinder) -> ShellTopology:
    c, r, h = cyl.base_center, cyl.radius, cyl.height
    axis_idx = "xyz".index(cyl.axis)
    # seam vertex sits at +r along the first non-axis direction
    radial_idx = 0 if axis_idx != 0 else 1
    v_bot = list(c)
    v_bot[radial_idx] += r
    v_top = list(v_bot)
    v_top[axis_idx] += h
    vertices = (tuple(v_bot), tuple(v_top))
    edges = (
        (0, 0, "circle"),  # bottom rim
        (1, 1, "circle"),  # top rim
        (0, 1, "line"),  # seam
    )
    axis_vec = [0, 0, 0]
    axis_vec[axis_idx] = 1
    faces = (
        Face("plane", ((0, False),), tuple(-a for a in axis_vec)),  # bottom cap
        Face("plane", ((1, True),), tuple(axis_vec)),  # top cap
        Face("cylinder", ((0, True), (2, True), (1, False), (2, False))),  # wall with seam
    )
    return ShellTopology(cyl.name, "cylinder", vertices, edges, faces)


def solid_topology(solid: Solid) -> ShellTopology:
    if isinstance(solid, PlacedBox):
        return box_topology(solid)
    return cylinder_topology(solid)


def build_brep(assembly: SolidAssembly) -> list[ShellTopology]:
    return [solid_topology(s) for s in assembly.solids]


def write_brep_dump(assembly: SolidAssembly) -> bytes:
    """Structured text dump of the assembly topology, one shell per solid."""
    shells = []
    for topo in build_brep(assembly):
        shells.append(
            {
                "name": topo.name,
                "kind": topo.kind,
                "vertices": [list(p) for p in topo.vertices],
                "edges": [[a, b, curve] for a, b, curve in topo.edges],
                "faces": [
                    {"surface": f.surface, "loop": [[e, 1 if fwd else -1] for e, fwd in f.loop]}
                    for f in topo.faces
                ],
                "counts": {"v": len(topo.vertices), "e": len(topo.edges), "f": len(topo.faces)},
                "euler": topo.euler,
                "watertight": topo.watertight,
            }
        )
    lo, hi = assembly.bbox
    doc = {
        "shell_count": len(shells),
        "bbox": {"min": list(lo), "max": list(hi)},
        "shells": shells,
    }
    return (json.dumps(doc, indent=1, sort_keys=False) + "\n").encode("utf-8")
