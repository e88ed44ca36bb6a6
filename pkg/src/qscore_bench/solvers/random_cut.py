"""The random-guess baseline: one uniform assignment per run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qubo import Qubo
from .base import Deadline, MinimizeOutcome, SolverBudget, TraceFn, format_params

__all__ = ["RandomCutSolver", "draw_uniform_assignment"]


def draw_uniform_assignment(rng: np.random.Generator, n: int) -> np.ndarray:
    """Shared first draw, so seeded runs of different solvers start alike."""
    return rng.integers(0, 2, n, dtype=np.int64).astype(np.uint8)


@dataclass(frozen=True)
class RandomCutSolver:
    """Scores the expected baseline cut; by definition its quality ratio is ~0."""

    name = "random"

    def params(self) -> dict:
        return {}

    @property
    def solver_id(self) -> str:
        return format_params(self.name, {})

    def minimize(
        self, qubo: Qubo, budget: SolverBudget, deadline: Deadline, trace: TraceFn | None = None
    ) -> MinimizeOutcome:
        rng = np.random.Generator(np.random.PCG64(budget.seed))
        x = draw_uniform_assignment(rng, qubo.n)
        if trace is not None:
            trace(1, float(qubo.energy(x)))
        return MinimizeOutcome(x, 1, True)
