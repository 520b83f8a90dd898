"""Parameter space definition for prefabricated bridge piers.

A design is a vector of 15 named integer parameters in three kinds:
recognition parameters (dimensions read off a drawing annotation),
counting parameters (repeated-component counts), and composite
parameters (derived by formula from the others).  The schema also
carries the formula table for composites and the engineering
constraint set every sampled design must satisfy.

All values are integer millimeters (dimensions) or plain integers
(counts).  Arithmetic is exact: a division formula that does not
divide evenly is an error, never a rounded value.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from enum import Enum
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

SCHEMA_VERSION = "pier-15p-v1"


class SchemaError(Exception):
    """Base class for schema definition and evaluation errors."""


class MissingInputError(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"missing input parameter: {name}")
        self.name = name


class NonIntegerResultError(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"formula for {name} does not divide evenly")
        self.name = name


class NonPositiveResultError(SchemaError):
    def __init__(self, name: str, value: int):
        super().__init__(f"formula for {name} produced non-positive value {value}")
        self.name = name
        self.value = value


class UnknownParameterError(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"unknown parameter: {name}")
        self.name = name


class CyclicFormulaError(SchemaError):
    pass


class Kind(Enum):
    RECOGNITION = "recognition"
    COUNTING = "counting"
    COMPOSITE = "composite"


class Unit(Enum):
    MILLIMETER = "mm"
    COUNT = "count"


# -- Arithmetic expressions ---------------------------------------------------
# Formulas and constraint sides are small expression trees over parameter
# names, integer constants, and the operators + - * /.  Division is exact
# integer division: a remainder is a NonIntegerResultError at evaluation.


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


Expr = Ref | Const | BinOp

_AST_OPS = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/"}


def parse_expr(text: str) -> Expr:
    """Parse an arithmetic expression string into an Expr tree."""
    text = text.strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise SchemaError(f"cannot parse expression {text!r}: {exc}") from None
    return _from_ast(tree.body, text)


def _from_ast(node: ast.AST, text: str) -> Expr:
    if isinstance(node, ast.Name):
        return Ref(node.id)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Const(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _AST_OPS:
        return BinOp(_AST_OPS[type(node.op)], _from_ast(node.left, text), _from_ast(node.right, text))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _from_ast(node.operand, text)
        if isinstance(inner, Const):
            return Const(-inner.value)
        return BinOp("-", Const(0), inner)
    raise SchemaError(f"unsupported construct in expression {text!r}")


def expr_refs(expr: Expr) -> set[str]:
    if isinstance(expr, Ref):
        return {expr.name}
    if isinstance(expr, Const):
        return set()
    return expr_refs(expr.left) | expr_refs(expr.right)


def eval_expr(expr: Expr, env: Mapping[str, int], owner: str | None = None) -> int:
    """Evaluate an expression over integer bindings, exactly.

    `owner` names the composite being computed, for error reporting.
    """
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Ref):
        try:
            return env[expr.name]
        except KeyError:
            raise MissingInputError(expr.name) from None
    a = eval_expr(expr.left, env, owner)
    b = eval_expr(expr.right, env, owner)
    if expr.op == "+":
        return a + b
    if expr.op == "-":
        return a - b
    if expr.op == "*":
        return a * b
    # exact division: remainder means the formula does not apply on this grid
    if b == 0 or a % b != 0:
        raise NonIntegerResultError(owner or "<expr>")
    return a // b


def expr_to_str(expr: Expr) -> str:
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Const):
        return str(expr.value)
    left, right = expr_to_str(expr.left), expr_to_str(expr.right)
    if isinstance(expr.left, BinOp):
        left = f"({left})"
    if isinstance(expr.right, BinOp):
        right = f"({right})"
    return f"{left} {expr.op} {right}"


# -- Schema types -------------------------------------------------------------


@dataclass(frozen=True)
class ParameterDef:
    name: str
    kind: Kind
    unit: Unit
    sample_range: tuple[int, int] | None  # None for composites
    grid_step: int = 1

    def __post_init__(self):
        if self.kind is Kind.COMPOSITE:
            if self.sample_range is not None:
                raise SchemaError(f"composite {self.name} must not carry a sample range")
        else:
            if self.sample_range is None:
                raise SchemaError(f"{self.name} needs a sample range")
            lo, hi = self.sample_range
            if lo > hi or lo <= 0:
                raise SchemaError(f"bad sample range for {self.name}: [{lo}, {hi}]")
            if self.grid_step <= 0 or (hi - lo) % self.grid_step != 0:
                raise SchemaError(f"grid step {self.grid_step} does not tile [{lo}, {hi}] for {self.name}")

    def grid_values(self) -> range:
        lo, hi = self.sample_range
        return range(lo, hi + 1, self.grid_step)


@dataclass(frozen=True)
class ParameterSchema:
    params: tuple[ParameterDef, ...]
    version: str = SCHEMA_VERSION

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate parameter names")
        if len(names) != 15:
            raise SchemaError(f"schema must define 15 parameters, got {len(names)}")

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.params]

    def by_name(self, name: str) -> ParameterDef:
        for p in self.params:
            if p.name == name:
                return p
        raise UnknownParameterError(name)

    def names_of_kind(self, kind: Kind) -> list[str]:
        return [p.name for p in self.params if p.kind is kind]

    @property
    def sampled(self) -> list[ParameterDef]:
        return [p for p in self.params if p.kind is not Kind.COMPOSITE]


@dataclass(frozen=True)
class FormulaTable:
    """Composite-name -> expression map with an acyclic dependency graph."""

    formulas: dict[str, Expr]
    order: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        graph = {name: expr_refs(expr) & set(self.formulas) for name, expr in self.formulas.items()}
        try:
            order = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise CyclicFormulaError(f"cyclic formula dependencies: {exc.args[1]}") from None
        object.__setattr__(self, "order", order)

    def inputs(self) -> set[str]:
        """Names referenced by formulas that are not themselves composites."""
        refs: set[str] = set()
        for expr in self.formulas.values():
            refs |= expr_refs(expr)
        return refs - set(self.formulas)


class Scope(Enum):
    INTRA_FRONT = "intra:front"
    INTRA_TOP = "intra:top"
    INTRA_SIDE = "intra:side"
    INTER_VIEW = "inter"


_REL_FUNCS = {"<": int.__lt__, "<=": int.__le__, "==": int.__eq__}


@dataclass(frozen=True)
class Constraint:
    id: str
    scope: Scope
    lhs: Expr
    op: str  # < <= ==
    rhs: Expr

    def __post_init__(self):
        if self.op not in _REL_FUNCS:
            raise SchemaError(f"unsupported relation {self.op!r} in constraint {self.id}")

    def holds(self, env: Mapping[str, int]) -> tuple[bool, int, int]:
        lv = eval_expr(self.lhs, env)
        rv = eval_expr(self.rhs, env)
        return _REL_FUNCS[self.op](lv, rv), lv, rv


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[Constraint, ...]

    def __iter__(self):
        return iter(self.constraints)

    def by_id(self, cid: str) -> Constraint:
        for c in self.constraints:
            if c.id == cid:
                return c
        raise KeyError(cid)


@dataclass(frozen=True)
class Violation:
    constraint_id: str
    lhs_value: int
    rhs_value: int


@dataclass(frozen=True)
class ParameterVector:
    """One fully evaluated design: all 15 name -> value bindings."""

    values: dict[str, int]
    schema_version: str = SCHEMA_VERSION

    def __getitem__(self, name: str) -> int:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)


def constraint_from_str(cid: str, scope: Scope, text: str) -> Constraint:
    """Parse a constraint like "a + b < c" into its two expression sides."""
    for op in ("<=", "==", "<"):
        if op in text:
            lhs, rhs = text.split(op, 1)
            return Constraint(cid, scope, parse_expr(lhs), op, parse_expr(rhs))
    raise SchemaError(f"no relation found in constraint {text!r}")


# -- Default pier schema ------------------------------------------------------

_RECOGNITION_RANGES = {
    "cap_beam_cross_dim": (8000, 16000),
    "cap_beam_height": (1200, 2400),
    "pier_column_cross_dim": (800, 1800),
    "pier_column_height": (4000, 12000),
    "pile_spacing": (2200, 4200),
    "pile_cap_height": (1500, 3000),
}

_COUNTING_RANGES = {
    "num_pier_columns": (2, 5),
    "num_piles": (2, 6),
    "num_bearings": (2, 6),
}

_COMPOSITE_FORMULAS = {
    "cross_bridge_pier_spacing": "pier_column_cross_dim + pile_spacing",
    "total_structure_height": "pile_cap_height + pier_column_height + cap_beam_height",
    "column_envelope_width": "(num_pier_columns - 1) * cross_bridge_pier_spacing + pier_column_cross_dim",
    "pile_row_extent": "(num_piles - 1) * pile_spacing",
    "cap_beam_overhang": "(cap_beam_cross_dim - column_envelope_width) / 2",
    "bearing_pitch": "cap_beam_cross_dim / (num_bearings + 1)",
}

_DEFAULT_CONSTRAINTS = [
    ("spacing_lt_capbeam", Scope.INTRA_FRONT, "cross_bridge_pier_spacing < cap_beam_cross_dim"),
    ("column_lt_spacing", Scope.INTRA_FRONT, "pier_column_cross_dim < pile_spacing"),
    ("envelope_lt_capbeam", Scope.INTRA_FRONT, "column_envelope_width < cap_beam_cross_dim"),
    ("pile_row_lt_capbeam", Scope.INTRA_TOP, "pile_row_extent < cap_beam_cross_dim"),
    ("overhang_positive", Scope.INTRA_FRONT, "0 < cap_beam_overhang"),
    ("pitch_positive", Scope.INTRA_FRONT, "0 < bearing_pitch"),
    ("total_height_positive", Scope.INTER_VIEW, "0 < total_structure_height"),
    ("columns_min", Scope.INTRA_FRONT, "2 <= num_pier_columns"),
    ("columns_max", Scope.INTRA_FRONT, "num_pier_columns <= 5"),
    ("piles_min", Scope.INTRA_TOP, "2 <= num_piles"),
    ("piles_max", Scope.INTRA_TOP, "num_piles <= 6"),
    ("bearings_min", Scope.INTRA_FRONT, "2 <= num_bearings"),
    ("bearings_max", Scope.INTRA_FRONT, "num_bearings <= 6"),
]


def default_schema() -> tuple[ParameterSchema, FormulaTable, ConstraintSet]:
    """The built-in prefabricated-pier parameter space (6/3/6 split)."""
    params = []
    for name, rng in _RECOGNITION_RANGES.items():
        params.append(ParameterDef(name, Kind.RECOGNITION, Unit.MILLIMETER, rng, grid_step=100))
    for name, rng in _COUNTING_RANGES.items():
        params.append(ParameterDef(name, Kind.COUNTING, Unit.COUNT, rng, grid_step=1))
    for name in _COMPOSITE_FORMULAS:
        unit = Unit.MILLIMETER
        params.append(ParameterDef(name, Kind.COMPOSITE, unit, None))
    schema = ParameterSchema(tuple(params))
    formulas = FormulaTable({name: parse_expr(src) for name, src in _COMPOSITE_FORMULAS.items()})
    constraints = ConstraintSet(tuple(constraint_from_str(cid, scope, text) for cid, scope, text in _DEFAULT_CONSTRAINTS))
    return schema, formulas, constraints


# -- Operations ---------------------------------------------------------------


def eval_composites(partial: Mapping[str, int], formulas: FormulaTable, schema: ParameterSchema) -> ParameterVector:
    """Fill in all composite values from the 9 sampled ones.

    Composites are computed in dependency order with exact integer
    arithmetic.  Raises MissingInputError, NonIntegerResultError, or
    NonPositiveResultError.
    """
    for name in formulas.inputs():
        if name not in partial:
            raise MissingInputError(name)
    env = dict(partial)
    for name in formulas.order:
        value = eval_expr(formulas.formulas[name], env, owner=name)
        if value <= 0:
            raise NonPositiveResultError(name, value)
        env[name] = value
    ordered = {name: env[name] for name in schema.names}
    return ParameterVector(ordered, schema.version)


def check_constraints(vector: ParameterVector | Mapping[str, int], constraints: ConstraintSet) -> list[Violation]:
    """Evaluate every constraint; return violations in constraint order."""
    env = vector.values if isinstance(vector, ParameterVector) else vector
    violations = []
    for c in constraints:
        for name in expr_refs(c.lhs) | expr_refs(c.rhs):
            if name not in env:
                raise UnknownParameterError(name)
        ok, lv, rv = c.holds(env)
        if not ok:
            violations.append(Violation(c.id, lv, rv))
    return violations


def validate_vector(vector: ParameterVector, schema: ParameterSchema, formulas: FormulaTable) -> None:
    """Assert the 15-name shape, positivity, and composite self-consistency."""
    if set(vector.values) != set(schema.names):
        raise SchemaError("vector names do not match schema")
    for name, value in vector.values.items():
        if not isinstance(value, int) or value <= 0:
            raise NonPositiveResultError(name, value)
    partial = {n: vector[n] for n in schema.names if n not in formulas.formulas}
    recomputed = eval_composites(partial, formulas, schema)
    for name in formulas.formulas:
        if recomputed[name] != vector[name]:
            raise SchemaError(f"composite {name} inconsistent: {vector[name]} != {recomputed[name]}")


# -- Serialization ------------------------------------------------------------


def schema_to_dict(schema: ParameterSchema, formulas: FormulaTable, constraints: ConstraintSet) -> dict:
    return {
        "version": schema.version,
        "parameters": [
            {
                "name": p.name,
                "kind": p.kind.value,
                "unit": p.unit.value,
                **({"range": list(p.sample_range), "step": p.grid_step} if p.sample_range else {}),
            }
            for p in schema.params
        ],
        "formulas": {name: expr_to_str(formulas.formulas[name]) for name in formulas.formulas},
        "constraints": [
            {"id": c.id, "scope": c.scope.value, "rule": f"{expr_to_str(c.lhs)} {c.op} {expr_to_str(c.rhs)}"}
            for c in constraints
        ],
    }


def schema_from_dict(data: dict) -> tuple[ParameterSchema, FormulaTable, ConstraintSet]:
    params = []
    for entry in data["parameters"]:
        params.append(
            ParameterDef(
                entry["name"],
                Kind(entry["kind"]),
                Unit(entry["unit"]),
                tuple(entry["range"]) if "range" in entry else None,
                entry.get("step", 1),
            )
        )
    schema = ParameterSchema(tuple(params), data.get("version", SCHEMA_VERSION))
    formulas = FormulaTable({name: parse_expr(src) for name, src in data["formulas"].items()})
    composites = set(schema.names_of_kind(Kind.COMPOSITE))
    if set(formulas.formulas) != composites:
        raise SchemaError("formula table does not cover exactly the composite parameters")
    constraints = ConstraintSet(
        tuple(constraint_from_str(c["id"], Scope(c["scope"]), c["rule"]) for c in data["constraints"])
    )
    return schema, formulas, constraints


def load_schema(path) -> tuple[ParameterSchema, FormulaTable, ConstraintSet]:
    with open(path, "r", encoding="utf-8") as fh:
        return schema_from_dict(json.load(fh))


def vector_to_dict(vector: ParameterVector, sample_id: str | None = None) -> dict:
    out: dict = {"schema_version": vector.schema_version}
    if sample_id is not None:
        out["sample_id"] = sample_id
    out["values"] = dict(vector.values)
    return out


def vector_from_dict(data: dict) -> ParameterVector:
    return ParameterVector({k: int(v) for k, v in data["values"].items()}, data.get("schema_version", SCHEMA_VERSION))
