"""The Q-score protocol: quality ratio, per-size aggregation, size sweep.

For one problem size n, a solver is run on m seeded G(n, 1/2) instances and
its mean best cut C is normalised to

    beta = (C - baseline) / (cmax - baseline)

where ``baseline`` is the expected cost of a uniformly random cut (n^2/8 by
convention, n(n-1)/8 exactly) and ``cmax`` approximates the optimal cut,
either with the closed-form fit n^2/8 + 0.178 n^1.5 or with a stored oracle
value (the mean best cut of a strong reference solver on the same seeded
instances). beta is ~0 for random guessing and ~1 at the optimum.

The Q-score of a solver is the largest n that keeps beta above the 0.2
threshold while the mean solve time stays within the wall budget. Sizes are
swept in increasing order; the sweep stops when beta falls to the threshold,
when the mean time exceeds a hard cap, or when the schedule runs out.

Instances at size n use seeds seed_base .. seed_base+m-1. Solver seeds are
derived per instance by SplitMix64(budget.seed + index) so that solver
randomness is decorrelated from the instance stream even when both bases
are equal.
"""

from __future__ import annotations

import dataclasses
import json
import math
import platform
import socket
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import generate_er_graph
from .solvers import (
    ExactSolver,
    SimulatedAnnealingSolver,
    Solver,
    SolverBudget,
    SolverRun,
    SolverStatus,
    solve,
    splitmix64,
)

__all__ = [
    "BetaParams",
    "SizeRecord",
    "SweepSchedule",
    "SweepReport",
    "StopReason",
    "ScoringError",
    "OracleTable",
    "cmax_approx",
    "random_cut_baseline",
    "beta",
    "evaluate_size",
    "build_oracle",
    "run_sweep",
    "environment_fingerprint",
]

CMAX_MODES = ("approximation", "oracle")
BASELINE_CONVENTIONS = ("n2_over_8", "exact")

EXACT_ORACLE_CUTOFF = 24  # up to here the enumeration oracle is cheap


class ScoringError(RuntimeError):
    """Raised when the quality ratio is undefined (degenerate denominator)."""


@dataclass(frozen=True)
class BetaParams:
    """Knobs of the scoring protocol, with the conventional defaults."""

    beta_star: float = 0.2
    m_instances: int = 100
    cmax_mode: str = "approximation"
    random_baseline: str = "n2_over_8"

    def __post_init__(self):
        if not (0 < self.beta_star < 1):
            raise ValueError("beta_star must lie in (0, 1)")
        if self.m_instances < 1:
            raise ValueError("m_instances must be >= 1")
        if self.cmax_mode not in CMAX_MODES:
            raise ValueError(f"cmax_mode must be one of {CMAX_MODES}")
        if self.random_baseline not in BASELINE_CONVENTIONS:
            raise ValueError(f"random_baseline must be one of {BASELINE_CONVENTIONS}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def cmax_approx(n: int) -> float:
    """Closed-form stand-in for the optimal cut: n^2/8 + 0.178 n^(3/2).

    The power-law constant comes from fitting optimal cuts at small sizes,
    so the value is least accurate at low n; oracle mode exists for that.
    """
    if n < 1:
        raise ValueError("size must be >= 1")
    return n * n / 8.0 + 0.178 * n**1.5


def random_cut_baseline(n: int, convention: str = "n2_over_8") -> float:
    """Expected cut cost of uniform random guessing on G(n, 1/2)."""
    if convention == "n2_over_8":
        return n * n / 8.0
    if convention == "exact":
        return n * (n - 1) / 8.0
    raise ValueError(f"unknown baseline convention {convention!r}")


def beta(n: int, mean_cut: float, cmax: float, baseline: float) -> float:
    """(mean_cut - baseline) / (cmax - baseline); 0 = random, 1 = optimal."""
    denom = cmax - baseline
    if denom <= 0:
        raise ScoringError(
            f"degenerate quality denominator at n={n}: cmax={cmax} <= baseline={baseline}"
        )
    return (mean_cut - baseline) / denom


@dataclass(frozen=True)
class SizeRecord:
    """Aggregate of m solver runs at one size."""

    n: int
    mean_cut: float
    std_cut: float
    beta: float
    beta_stderr: float
    mean_time_ms: float
    min_time_ms: float
    max_time_ms: float
    no_result_count: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class OracleTable:
    """Stored per-size reference cuts, keyed to one seeded instance set.

    File form: {"meta": {...}, "cmax": {"<n>": value}}. The meta block pins
    (seed_base, m_instances); using the table with a different instance set
    is refused, since reference cuts are only comparable on the same seeds.
    """

    meta: dict
    cmax: dict[int, float]

    def value_for(self, n: int, seed_base: int, m_instances: int) -> float:
        if int(self.meta.get("seed_base", -1)) != seed_base or int(self.meta.get("m_instances", -1)) != m_instances:
            raise ScoringError(
                "oracle table was built for seed_base="
                f"{self.meta.get('seed_base')}, m={self.meta.get('m_instances')}; "
                f"requested seed_base={seed_base}, m={m_instances}"
            )
        if n not in self.cmax:
            raise ScoringError(f"oracle table has no entry for n={n}")
        return float(self.cmax[n])

    def to_json(self) -> str:
        payload = {"meta": self.meta, "cmax": {str(n): v for n, v in sorted(self.cmax.items())}}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_json(cls, text: str) -> "OracleTable":
        obj = json.loads(text)
        return cls(meta=dict(obj["meta"]), cmax={int(k): float(v) for k, v in obj["cmax"].items()})

    @classmethod
    def load(cls, path: str | Path) -> "OracleTable":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _instance_budget(budget: SolverBudget, index: int) -> SolverBudget:
    return budget.with_seed(splitmix64((budget.seed + index) & (2**64 - 1)))


def _solve_one(args) -> SolverRun:
    solver, n, seed, budget = args
    g = generate_er_graph(n, 0.5, seed)
    return solve(solver, g, budget)


def _run_instances(
    solver: Solver, n: int, m: int, budget: SolverBudget, seed_base: int, workers: int = 1
) -> list[SolverRun]:
    tasks = [(solver, n, seed_base + i, _instance_budget(budget, i)) for i in range(m)]
    if workers <= 1:
        return [_solve_one(t) for t in tasks]
    # wall-clock runs should keep workers=1: co-scheduling distorts timings
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_one, tasks))


def aggregate_record(
    n: int,
    runs: list[SolverRun],
    params: BetaParams,
    cmax: float,
) -> SizeRecord:
    """Pure aggregation of per-instance runs into a SizeRecord.

    An instance with no result contributes the random-baseline cost, which
    pins its individual contribution to the quality ratio at zero; with every
    instance failing, beta is exactly 0.
    """
    baseline = random_cut_baseline(n, params.random_baseline)
    cuts = np.array(
        [baseline if r.status is SolverStatus.NO_RESULT else float(r.best_cut) for r in runs],
        dtype=np.float64,
    )
    times = np.array([r.elapsed_ms for r in runs], dtype=np.float64)
    m = len(runs)
    mean_cut = float(cuts.mean())
    std_cut = float(cuts.std(ddof=1)) if m > 1 else 0.0
    b = beta(n, mean_cut, cmax, baseline)
    stderr = (std_cut / math.sqrt(m)) / (cmax - baseline)
    return SizeRecord(
        n=n,
        mean_cut=mean_cut,
        std_cut=std_cut,
        beta=b,
        beta_stderr=stderr,
        mean_time_ms=float(times.mean()),
        min_time_ms=float(times.min()),
        max_time_ms=float(times.max()),
        no_result_count=sum(1 for r in runs if r.status is SolverStatus.NO_RESULT),
    )


def evaluate_size(
    solver: Solver,
    n: int,
    params: BetaParams,
    budget: SolverBudget,
    seed_base: int,
    oracle: OracleTable | None = None,
    workers: int = 1,
) -> SizeRecord:
    """Run the solver on the m seeded instances of size n and aggregate."""
    if params.cmax_mode == "oracle":
        if oracle is None:
            raise ScoringError("cmax_mode 'oracle' requires an oracle table")
        cmax = oracle.value_for(n, seed_base, params.m_instances)
    else:
        cmax = cmax_approx(n)
    runs = _run_instances(solver, n, params.m_instances, budget, seed_base, workers)
    return aggregate_record(n, runs, params, cmax)


def default_oracle_solver(n: int, exact_cutoff: int = EXACT_ORACLE_CUTOFF) -> Solver:
    """Exact enumeration where it is cheap, simulated annealing above that."""
    if n <= exact_cutoff:
        return ExactSolver()
    return SimulatedAnnealingSolver()


def build_oracle(
    sizes: list[int],
    params: BetaParams,
    budget: SolverBudget,
    seed_base: int,
    solver: Solver | None = None,
    exact_cutoff: int = EXACT_ORACLE_CUTOFF,
    workers: int = 1,
) -> OracleTable:
    """Mean best cut of a strong reference solver per size, on the same seeds.

    With ``solver=None`` each size picks the default reference (exact below
    the cutoff, annealing above). A reference run that produces no result
    would poison the table, so it is an error rather than a substitution.
    """
    cmax: dict[int, float] = {}
    solver_ids = {}
    for n in sizes:
        chosen = solver if solver is not None else default_oracle_solver(n, exact_cutoff)
        runs = _run_instances(chosen, n, params.m_instances, budget, seed_base, workers)
        failures = [r for r in runs if r.status is SolverStatus.NO_RESULT]
        if failures:
            raise ScoringError(f"oracle solver produced no result on {len(failures)} instance(s) at n={n}")
        cmax[int(n)] = float(np.mean([r.best_cut for r in runs]))
        solver_ids[int(n)] = runs[0].solver_id
    meta = {
        "seed_base": int(seed_base),
        "m_instances": params.m_instances,
        "budget": _budget_dict(budget),
        "solver_ids": {str(k): v for k, v in sorted(solver_ids.items())},
    }
    return OracleTable(meta=meta, cmax=cmax)


@dataclass(frozen=True)
class SweepSchedule:
    """Sizes start, start+step, ... up to max_n inclusive."""

    start: int
    step: int
    max_n: int

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("schedule start must be >= 1")
        if self.step < 1:
            raise ValueError("schedule step must be >= 1")
        if self.max_n < self.start:
            raise ValueError("schedule max_n must be >= start")

    def sizes(self) -> list[int]:
        return list(range(self.start, self.max_n + 1, self.step))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


class StopReason:
    BETA_BELOW_THRESHOLD = "beta_below_threshold"
    MEAN_TIME_EXCEEDED = "mean_time_exceeded"
    SIZE_LIMIT = "size_limit"


@dataclass(frozen=True)
class SweepReport:
    """Everything one sweep produced, plus the config that produced it."""

    solver_id: str
    solver_name: str
    solver_params: dict
    schedule: SweepSchedule
    params: BetaParams
    budget: SolverBudget
    seed_base: int
    workers: int
    mean_time_cap_ms: float
    records: tuple[SizeRecord, ...]
    qscore: int | None
    stop_reason: str
    environment: dict

    @property
    def qscore_label(self) -> str:
        if self.qscore is None:
            return f"below start n={self.schedule.start}"
        return str(self.qscore)

    def to_dict(self) -> dict:
        return {
            "solver_id": self.solver_id,
            "solver": {"name": self.solver_name, "params": self.solver_params},
            "schedule": self.schedule.to_dict(),
            "params": self.params.to_dict(),
            "budget": _budget_dict(self.budget),
            "seed_base": self.seed_base,
            "workers": self.workers,
            "mean_time_cap_ms": self.mean_time_cap_ms,
            "records": [r.to_dict() for r in self.records],
            "qscore": self.qscore,
            "qscore_label": self.qscore_label,
            "stop_reason": self.stop_reason,
            "environment": self.environment,
        }


def _budget_dict(budget: SolverBudget) -> dict:
    return {"wall_ms": budget.wall_ms, "quota": budget.quota, "seed": budget.seed}


def environment_fingerprint() -> dict:
    """Host facts embedded in every report; Q-scores are hardware-bound."""
    return {
        "hostname": socket.gethostname(),
        "platform": platform.platform(),
        "processor": platform.processor() or platform.machine(),
        "python": platform.python_version(),
    }


def run_sweep(
    solver: Solver,
    schedule: SweepSchedule,
    params: BetaParams,
    budget: SolverBudget,
    seed_base: int,
    oracle: OracleTable | None = None,
    workers: int = 1,
    mean_time_cap_ms: float = 100_000.0,
    solver_name: str = "",
    solver_params: dict | None = None,
    progress=None,
) -> SweepReport:
    """Evaluate sizes in increasing order and derive the Q-score.

    Stops after the first size whose beta falls to the threshold or whose
    mean runtime exceeds ``mean_time_cap_ms``; otherwise exhausts the
    schedule. The Q-score is the largest evaluated size with beta above the
    threshold and (under a wall-clock budget) mean runtime within the
    budget. Sizes where only the time test fails still appear in records.
    """
    if solver_params is None and hasattr(solver, "params"):
        solver_params = solver.params()  # effective values, defaults included
    records: list[SizeRecord] = []
    stop_reason = StopReason.SIZE_LIMIT
    for n in schedule.sizes():
        record = evaluate_size(solver, n, params, budget, seed_base, oracle, workers)
        records.append(record)
        if progress is not None:
            progress(record)
        if record.beta <= params.beta_star:
            stop_reason = StopReason.BETA_BELOW_THRESHOLD
            break
        if record.mean_time_ms > mean_time_cap_ms:
            stop_reason = StopReason.MEAN_TIME_EXCEEDED
            break

    qualifying = [
        r.n
        for r in records
        if r.beta > params.beta_star and (budget.wall_ms is None or r.mean_time_ms <= budget.wall_ms)
    ]
    return SweepReport(
        solver_id=solver.solver_id,
        solver_name=solver_name or getattr(solver, "name", ""),
        solver_params=dict(solver_params or {}),
        schedule=schedule,
        params=params,
        budget=budget,
        seed_base=seed_base,
        workers=workers,
        mean_time_cap_ms=mean_time_cap_ms,
        records=tuple(records),
        qscore=max(qualifying) if qualifying else None,
        stop_reason=stop_reason,
        environment=environment_fingerprint(),
    )
