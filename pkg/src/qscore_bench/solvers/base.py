"""Uniform time-budgeted solving interface.

Every solver minimises a QUBO under a :class:`SolverBudget` and reports a
:class:`SolverRun`. Budgets come in two modes:

* WallClock(duration): the solver compares the clock at its documented loop
  boundary (per sweep, per outer loop, per enumeration chunk) and may
  overshoot by at most one such loop. Elapsed time is reported honestly,
  never clamped.
* Deterministic(quota): the loop count replaces the clock, making the run a
  pure function of (solver parameters, instance, seed, quota). Measured wall
  time is not an observable in this mode and is reported as 0.0.

Running out of budget is never an exception: a solver that scored nothing
reports status NO_RESULT, which the scoring layer converts to the
random-baseline cost.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from ..graphs import GraphInstance, cut_cost
from ..qubo import Qubo, maxcut_to_qubo

__all__ = [
    "SolverBudget",
    "SolverStatus",
    "SolverRun",
    "MinimizeOutcome",
    "Solver",
    "TraceFn",
    "solve",
    "splitmix64",
]

_MAX_SEED = 2**64 - 1

# trace(iterations_so_far, best_energy): called whenever the incumbent improves
TraceFn = Callable[[int, float], None]


@dataclass(frozen=True)
class SolverBudget:
    """Either a wall-clock allowance or an iteration quota, plus the RNG seed.

    The quota unit is each solver's documented outer unit: sweeps for
    simulated annealing, outer decomposition loops for tabu, assignments
    scored for exact enumeration. A quota of 0 is permitted and means "score
    the starting point only" (nothing at all, for the exact solver).
    """

    wall_ms: float | None = None
    quota: int | None = None
    seed: int = 0

    def __post_init__(self):
        if (self.wall_ms is None) == (self.quota is None):
            raise ValueError("exactly one of wall_ms/quota must be set")
        if self.wall_ms is not None and not self.wall_ms > 0:
            raise ValueError("wall-clock budget must be > 0 ms")
        if self.quota is not None and self.quota < 0:
            raise ValueError("iteration quota must be >= 0")
        if not (0 <= self.seed <= _MAX_SEED):
            raise ValueError("seed must fit in 64 bits")

    @classmethod
    def wall_clock(cls, ms: float, seed: int = 0) -> "SolverBudget":
        return cls(wall_ms=float(ms), seed=seed)

    @classmethod
    def deterministic(cls, quota: int, seed: int = 0) -> "SolverBudget":
        return cls(quota=int(quota), seed=seed)

    @property
    def is_deterministic(self) -> bool:
        return self.quota is not None

    def with_seed(self, seed: int) -> "SolverBudget":
        return replace(self, seed=int(seed) & _MAX_SEED)


class SolverStatus(enum.Enum):
    SOLVED = "solved"
    BUDGET_EXCEEDED_WITH_RESULT = "budget_exceeded_with_result"
    NO_RESULT = "no_result"


@dataclass(frozen=True, eq=False)
class SolverRun:
    """Outcome of one solver execution on one instance.

    Not comparable as a value (the assignment is an array); compare the
    fields you mean, or the dicts from :meth:`to_dict`.
    """

    best_assignment: np.ndarray | None
    best_cut: int
    elapsed_ms: float
    status: SolverStatus
    solver_id: str
    iterations: int
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "best_assignment": None if self.best_assignment is None else [int(v) for v in self.best_assignment],
            "best_cut": self.best_cut,
            "elapsed_ms": self.elapsed_ms,
            "status": self.status.value,
            "solver_id": self.solver_id,
            "iterations": self.iterations,
            "detail": self.detail,
        }


@dataclass
class MinimizeOutcome:
    """What a solver hands back to :func:`solve`."""

    assignment: np.ndarray | None
    iterations: int
    completed: bool  # True iff the solver reached its own stopping criterion
    detail: str = ""


class Deadline:
    """Absolute wall deadline for WallClock budgets; absent in quota mode."""

    __slots__ = ("at",)

    def __init__(self, at: float | None):
        self.at = at

    @classmethod
    def from_budget(cls, budget: SolverBudget, started_at: float) -> "Deadline":
        if budget.wall_ms is None:
            return cls(None)
        return cls(started_at + budget.wall_ms / 1000.0)

    def expired(self) -> bool:
        return self.at is not None and time.perf_counter() >= self.at

    def remaining(self) -> float:
        """Seconds left; +inf when there is no wall deadline."""
        if self.at is None:
            return float("inf")
        return self.at - time.perf_counter()


@runtime_checkable
class Solver(Protocol):
    """Minimises a QUBO within a budget; stateless between runs."""

    name: str

    @property
    def solver_id(self) -> str: ...

    def minimize(
        self, qubo: Qubo, budget: SolverBudget, deadline: Deadline, trace: TraceFn | None = None
    ) -> MinimizeOutcome: ...


def solve(solver: Solver, g: GraphInstance, budget: SolverBudget, trace: TraceFn | None = None) -> SolverRun:
    """Run one solver on one Max-Cut instance under one budget.

    The clock starts before the Max-Cut -> QUBO conversion (the conversion is
    part of the benchmarked computation; instance generation is not) and
    stops when the solver returns. The returned cut cost is recomputed from
    the graph, so ``best_cut == cut_cost(g, best_assignment)`` whenever a
    result exists.
    """
    started = time.perf_counter()
    deadline = Deadline.from_budget(budget, started)
    qubo = maxcut_to_qubo(g)
    outcome = solver.minimize(qubo, budget, deadline, trace)
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    if budget.is_deterministic:
        elapsed_ms = 0.0  # time is not an observable in quota mode

    if outcome.assignment is None:
        return SolverRun(
            best_assignment=None,
            best_cut=0,
            elapsed_ms=elapsed_ms,
            status=SolverStatus.NO_RESULT,
            solver_id=solver.solver_id,
            iterations=outcome.iterations,
            detail=outcome.detail,
        )

    assignment = np.asarray(outcome.assignment, dtype=np.uint8)
    status = SolverStatus.SOLVED if outcome.completed else SolverStatus.BUDGET_EXCEEDED_WITH_RESULT
    return SolverRun(
        best_assignment=assignment,
        best_cut=cut_cost(g, assignment),
        elapsed_ms=elapsed_ms,
        status=status,
        solver_id=solver.solver_id,
        iterations=outcome.iterations,
        detail=outcome.detail,
    )


def splitmix64(value: int) -> int:
    """One SplitMix64 step; decorrelates derived seeds from their base."""
    z = (value + 0x9E3779B97F4A7C15) & _MAX_SEED
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MAX_SEED
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MAX_SEED
    return (z ^ (z >> 31)) & _MAX_SEED


def format_params(name: str, params: dict) -> str:
    """Canonical solver_id: name(k=v, ...) with keys sorted."""
    if not params:
        return name
    inner = ",".join(f"{k}={_fmt_value(v)}" for k, v in sorted(params.items()))
    return f"{name}({inner})"


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return format(v, "g")
    return str(v)
