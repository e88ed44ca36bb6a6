"""Decomposition-based tabu search.

Keeps one full assignment and improves it in outer passes. Each pass covers
every variable once, ``subproblem_size`` at a time: the next block is the
not-yet-covered variables with the largest |single-flip delta| (ties broken
by index), the rest of the assignment is clamped, and the resulting dense
subproblem is improved by a single-flip tabu search (recently flipped
variables are forbidden for ``tenure`` iterations; a tabu move is still
allowed if it would beat the global best). Improved blocks are written back
immediately, so later blocks in the same pass see the update.

When n <= subproblem_size there is no decomposition: a pass is one inner
tabu search over the whole problem.

Stopping: a pass that improves the energy by no more than ``min_outer_gain``
ends the run (the solver's own stopping criterion, status SOLVED); otherwise
the budget does. The wall clock is compared at the end of every outer pass,
so a slow pass can overshoot the allowance; the overshoot is reported, not
hidden. The quota unit is outer passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qubo import Qubo
from .base import Deadline, MinimizeOutcome, SolverBudget, TraceFn, format_params
from .kernels import build_dense_subproblem, neighbor_sums, tabu_improve
from .random_cut import draw_uniform_assignment

__all__ = ["TabuDecompositionSolver"]


@dataclass(frozen=True)
class TabuDecompositionSolver:
    subproblem_size: int = 48
    tenure: int = 10
    inner_iterations: int | None = None  # None: 50 * subproblem size
    min_outer_gain: float = 0.0

    name = "tabu"

    def __post_init__(self):
        if self.subproblem_size < 1:
            raise ValueError("subproblem_size must be >= 1")
        if self.tenure < 0:
            raise ValueError("tenure must be >= 0")
        if self.inner_iterations is not None and self.inner_iterations < 1:
            raise ValueError("inner_iterations must be >= 1")
        if self.min_outer_gain < 0:
            raise ValueError("min_outer_gain must be >= 0")

    def params(self) -> dict:
        return {
            "subproblem_size": self.subproblem_size,
            "tenure": self.tenure,
            "inner_iterations": self.effective_inner_iterations,
            "min_outer_gain": self.min_outer_gain,
        }

    @property
    def solver_id(self) -> str:
        return format_params(self.name, self.params())

    @property
    def effective_inner_iterations(self) -> int:
        if self.inner_iterations is not None:
            return self.inner_iterations
        return 50 * self.subproblem_size

    def minimize(
        self, qubo: Qubo, budget: SolverBudget, deadline: Deadline, trace: TraceFn | None = None
    ) -> MinimizeOutcome:
        n = qubo.n
        arr = qubo.arrays()
        rng = np.random.Generator(np.random.PCG64(budget.seed))

        x = draw_uniform_assignment(rng, n)
        s = neighbor_sums(arr.indptr, arr.indices, arr.weights, x)
        energy = float(qubo.energy(x))
        best_x = x.copy()
        best_e = energy
        outer = 0
        if trace is not None:
            trace(outer, best_e)

        quota = budget.quota
        if quota == 0:
            return MinimizeOutcome(best_x, 0, False, "quota 0: initial assignment only")

        k = min(self.subproblem_size, n)
        inner = self.effective_inner_iterations
        marker = np.full(n, -1, dtype=np.int64)
        covered = np.empty(n, dtype=bool)
        completed = False

        while True:
            if quota is not None and outer >= quota:
                break

            pass_gain = 0.0
            covered[:] = False
            remaining = n
            while remaining > 0:
                scores = np.abs((1.0 - 2.0 * x) * (arr.diag + s))
                scores[covered] = -1.0
                order = np.argsort(-scores, kind="stable")
                chosen = np.sort(order[: min(k, remaining)]).astype(np.int64)
                covered[chosen] = True
                remaining -= chosen.shape[0]

                W, d = build_dense_subproblem(arr.indptr, arr.indices, arr.weights, arr.diag, s, x, chosen, marker)
                y = x[chosen].copy()
                gain, _ = tabu_improve(W, d, y, inner, self.tenure, best_e - energy)
                if gain < 0.0:
                    for a, i in enumerate(chosen):
                        if x[i] != y[a]:
                            sign = 1.0 - 2.0 * x[i]
                            lo, hi = arr.indptr[i], arr.indptr[i + 1]
                            np.add.at(s, arr.indices[lo:hi], sign * arr.weights[lo:hi])
                            x[i] ^= 1
                    energy += gain
                    pass_gain -= gain
                    if energy < best_e:
                        best_e = energy
                        best_x = x.copy()
                        if trace is not None:
                            trace(outer + 1, best_e)
            outer += 1

            if pass_gain <= self.min_outer_gain:
                completed = True  # a full pass over all blocks gained nothing
                break
            if deadline.expired():
                break

        detail = "" if completed else "stopped by budget"
        return MinimizeOutcome(best_x, outer, completed, detail)
