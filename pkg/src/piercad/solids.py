"""Executable modeling scripts and their interpreter.

A script is a flat list of neutral commands (make a box, make a
cylinder, place a solid) with integer-mm operands.  Interpreting a
script yields the world-placed solid assembly; the same assembly feeds
both the STEP writer and the B-Rep dump, closing the loop from the
parameter vector to simulation-ready 3D geometry.

Frame: x across the bridge, y along the bridge (structure centered on
y=0), z up with the ground plane at z=0.  Piles rise from the ground
plane into the pile cap and bearings are recessed into the cap-beam
top, so the assembly height equals the stacked component heights
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .drawing import (
    BEARING_HEIGHT,
    BEARING_WIDTH,
    CAP_BEAM_DEPTH,
    PILE_CAP_DEPTH,
    PILE_DIAMETER,
    pile_centers,
)
from .schema import ParameterVector

BEARING_DEPTH = 600

XYZ = tuple[int, int, int]


class ScriptError(Exception):
    pass


class DuplicateNameError(ScriptError):
    def __init__(self, name: str):
        super().__init__(f"solid name declared twice: {name}")
        self.name = name


class UnknownReferenceError(ScriptError):
    def __init__(self, name: str):
        super().__init__(f"place references undeclared solid: {name}")
        self.name = name


class NonPositiveExtentError(ScriptError):
    def __init__(self, name: str):
        super().__init__(f"solid {name} has a non-positive extent")
        self.name = name


@dataclass(frozen=True)
class MakeBox:
    name: str
    origin: XYZ
    extents: XYZ  # width (x), depth (y), height (z)


@dataclass(frozen=True)
class MakeCylinder:
    name: str
    base_center: XYZ
    radius: int
    height: int
    axis: str  # x, y, or z


@dataclass(frozen=True)
class Place:
    name: str
    translation: XYZ


Command = MakeBox | MakeCylinder | Place


@dataclass(frozen=True)
class ModelingScript:
    commands: tuple[Command, ...]

    def __post_init__(self):
        seen = set()
        for cmd in self.commands:
            if isinstance(cmd, (MakeBox, MakeCylinder)):
                if cmd.name in seen:
                    raise DuplicateNameError(cmd.name)
                seen.add(cmd.name)
            elif cmd.name not in seen:
                raise UnknownReferenceError(cmd.name)

    def solid_count(self) -> int:
        return sum(1 for c in self.commands if not isinstance(c, Place))


# -- Script generation --------------------------------------------------------


def script_from_vector(v: ParameterVector) -> ModelingScript:
    """Deterministic pier modeling script for one design."""
    w = v["cap_beam_cross_dim"]
    h_cap = v["pile_cap_height"]
    h_col = v["pier_column_height"]
    col = v["pier_column_cross_dim"]
    total = v["total_structure_height"]
    cmds: list[Command] = []

    cmds.append(MakeBox("pile_cap", (0, 0, 0), (w, PILE_CAP_DEPTH, h_cap)))
    cmds.append(Place("pile_cap", (0, -PILE_CAP_DEPTH // 2, 0)))
    for i in range(v["num_pier_columns"]):
        cmds.append(MakeBox(f"column_{i}", (0, 0, 0), (col, col, h_col)))
        cmds.append(Place(f"column_{i}", (v["cap_beam_overhang"] + i * v["cross_bridge_pier_spacing"], -col // 2, h_cap)))
    cmds.append(MakeBox("cap_beam", (0, 0, 0), (w, CAP_BEAM_DEPTH, v["cap_beam_height"])))
    cmds.append(Place("cap_beam", (0, -CAP_BEAM_DEPTH // 2, h_cap + h_col)))
    for j, cx in enumerate(pile_centers(v)):
        cmds.append(MakeCylinder(f"pile_{j}", (0, 0, 0), PILE_DIAMETER // 2, h_cap, "z"))
        cmds.append(Place(f"pile_{j}", (cx, 0, 0)))
    for k in range(1, v["num_bearings"] + 1):
        cmds.append(MakeBox(f"bearing_{k - 1}", (0, 0, 0), (BEARING_WIDTH, BEARING_DEPTH, BEARING_HEIGHT)))
        cmds.append(
            Place(f"bearing_{k - 1}", (k * v["bearing_pitch"] - BEARING_WIDTH // 2, -BEARING_DEPTH // 2, total - BEARING_HEIGHT))
        )
    return ModelingScript(tuple(cmds))


# -- Script text format -------------------------------------------------------


def format_script(script: ModelingScript) -> bytes:
    lines = []
    for cmd in script.commands:
        if isinstance(cmd, MakeBox):
            lines.append("box {} {} {} {} {} {} {}".format(cmd.name, *cmd.origin, *cmd.extents))
        elif isinstance(cmd, MakeCylinder):
            lines.append("cylinder {} {} {} {} {} {} {}".format(cmd.name, *cmd.base_center, cmd.radius, cmd.height, cmd.axis))
        else:
            lines.append("place {} {} {} {}".format(cmd.name, *cmd.translation))
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_script(data: bytes) -> ModelingScript:
    cmds: list[Command] = []
    for lineno, line in enumerate(data.decode("ascii").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            kind, name = parts[0], parts[1]
            if kind == "box":
                nums = [int(x) for x in parts[2:9]]
                cmds.append(MakeBox(name, tuple(nums[0:3]), tuple(nums[3:6])))
                extra = parts[9:]
            elif kind == "cylinder":
                nums = [int(x) for x in parts[2:7]]
                cmds.append(MakeCylinder(name, tuple(nums[0:3]), nums[3], nums[4], parts[7]))
                extra = parts[8:]
            elif kind == "place":
                nums = [int(x) for x in parts[2:5]]
                cmds.append(Place(name, tuple(nums)))
                extra = parts[5:]
            else:
                raise ScriptError(f"line {lineno}: unknown command {kind!r}")
            if extra:
                raise ScriptError(f"line {lineno}: trailing tokens {extra}")
        except (IndexError, ValueError):
            raise ScriptError(f"line {lineno}: malformed command: {line!r}") from None
    return ModelingScript(tuple(cmds))


# -- Interpreter --------------------------------------------------------------


@dataclass(frozen=True)
class PlacedBox:
    name: str
    origin: XYZ  # world min corner
    extents: XYZ

    def bounds(self) -> tuple[XYZ, XYZ]:
        o, e = self.origin, self.extents
        return o, (o[0] + e[0], o[1] + e[1], o[2] + e[2])

    def volume(self) -> int:
        return self.extents[0] * self.extents[1] * self.extents[2]


@dataclass(frozen=True)
class PlacedCylinder:
    name: str
    base_center: XYZ  # world
    radius: int
    height: int
    axis: str

    def bounds(self) -> tuple[XYZ, XYZ]:
        c, r, h = self.base_center, self.radius, self.height
        axis_idx = "xyz".index(self.axis)
        lo = [c[i] - r for i in range(3)]
        hi = [c[i] + r for i in range(3)]
        lo[axis_idx] = c[axis_idx]
        hi[axis_idx] = c[axis_idx] + h
        return tuple(lo), tuple(hi)

    def pi_volume_coefficient(self) -> int:
        return self.radius * self.radius * self.height


Solid = PlacedBox | PlacedCylinder


@dataclass(frozen=True)
class SolidAssembly:
    solids: tuple[Solid, ...]

    def __post_init__(self):
        if not self.solids:
            raise ScriptError("assembly is empty")

    @property
    def bbox(self) -> tuple[XYZ, XYZ]:
        los, his = zip(*(s.bounds() for s in self.solids))
        return (
            tuple(min(p[i] for p in los) for i in range(3)),
            tuple(max(p[i] for p in his) for i in range(3)),
        )

    @property
    def total_volume(self) -> tuple[Fraction, Fraction]:
        """(rational part, coefficient of pi), both in mm^3."""
        boxes = sum(s.volume() for s in self.solids if isinstance(s, PlacedBox))
        cyl = sum(s.pi_volume_coefficient() for s in self.solids if isinstance(s, PlacedCylinder))
        return Fraction(boxes), Fraction(cyl)


def _translate(p: XYZ, t: XYZ) -> XYZ:
    return (p[0] + t[0], p[1] + t[1], p[2] + t[2])


def interpret(script: ModelingScript) -> SolidAssembly:
    """Execute a script into world-placed solids."""
    declared: dict[str, Command] = {}
    offsets: dict[str, XYZ] = {}
    order: list[str] = []
    for cmd in script.commands:
        if isinstance(cmd, (MakeBox, MakeCylinder)):
            if cmd.name in declared:
                raise DuplicateNameError(cmd.name)
            declared[cmd.name] = cmd
            offsets[cmd.name] = (0, 0, 0)
            order.append(cmd.name)
        else:
            if cmd.name not in declared:
                raise UnknownReferenceError(cmd.name)
            offsets[cmd.name] = _translate(offsets[cmd.name], cmd.translation)

    solids: list[Solid] = []
    for name in order:
        cmd = declared[name]
        t = offsets[name]
        if isinstance(cmd, MakeBox):
            if min(cmd.extents) <= 0:
                raise NonPositiveExtentError(name)
            solids.append(PlacedBox(name, _translate(cmd.origin, t), cmd.extents))
        else:
            if cmd.radius <= 0 or cmd.height <= 0:
                raise NonPositiveExtentError(name)
            if cmd.axis not in ("x", "y", "z"):
                raise ScriptError(f"solid {name}: bad axis {cmd.axis!r}")
            solids.append(PlacedCylinder(name, _translate(cmd.base_center, t), cmd.radius, cmd.height, cmd.axis))
    return SolidAssembly(tuple(solids))
