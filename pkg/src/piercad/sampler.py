"""Constraint-guided rejection sampling of parameter vectors.

Each sampled parameter is drawn uniformly on its integer grid, the
composites are evaluated, and the candidate is kept only if every
constraint holds and every division formula divides evenly.  The result
is provably uniform over the accepted region of the grid.

sample(config, i) is a pure function of (seed, i): index i never
consumes randomness from index j, so batches can be generated in any
order or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import rng
from .schema import (
    ConstraintSet,
    FormulaTable,
    NonIntegerResultError,
    NonPositiveResultError,
    ParameterSchema,
    ParameterVector,
    check_constraints,
    default_schema,
    eval_composites,
)


class RejectionBudgetExhaustedError(Exception):
    """Raised when a sample index cannot find an accepted candidate.

    Signals an over-constrained schema rather than bad luck: the default
    budget allows ~10k candidate draws per sample.
    """

    def __init__(self, index: int, budget: int):
        super().__init__(f"sample {index}: no accepted candidate in {budget} attempts")
        self.index = index
        self.budget = budget


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    schema: ParameterSchema = None
    formulas: FormulaTable = None
    constraints: ConstraintSet = None
    max_rejections_per_sample: int = 10_000

    def __post_init__(self):
        if self.schema is None:
            schema, formulas, constraints = default_schema()
            object.__setattr__(self, "schema", schema)
            object.__setattr__(self, "formulas", formulas)
            object.__setattr__(self, "constraints", constraints)
        if self.max_rejections_per_sample < 1:
            raise ValueError("max_rejections_per_sample must be >= 1")


def sample(config: SamplerConfig, index: int) -> ParameterVector:
    """Draw the accepted vector for one sample index."""
    if index < 0:
        raise ValueError("index must be non-negative")
    g = rng.stream(config.seed, "sample", index)
    defs = config.schema.sampled
    grid_sizes = [len(p.grid_values()) for p in defs]
    for _ in range(config.max_rejections_per_sample):
        picks = g.integers(0, grid_sizes)  # one draw per sampled parameter
        partial = {
            p.name: p.sample_range[0] + int(k) * p.grid_step
            for p, k in zip(defs, picks)
        }
        try:
            vector = eval_composites(partial, config.formulas, config.schema)
        except (NonIntegerResultError, NonPositiveResultError):
            continue
        if not check_constraints(vector, config.constraints):
            return vector
    raise RejectionBudgetExhaustedError(index, config.max_rejections_per_sample)


def sample_batch(config: SamplerConfig, count: int) -> list[ParameterVector]:
    """Vectors for indices 0..count-1; element i equals sample(config, i)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    return [sample(config, i) for i in range(count)]
