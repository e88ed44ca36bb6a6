"""Simulated annealing over single-bit flips with restarts.

One sweep is n Metropolis proposals at a fixed temperature: a uniformly
chosen variable is flipped when the energy delta is <= 0, otherwise with
probability exp(-delta/T). The temperature is multiplied by ``cooling``
after every ``sweeps_per_temp`` sweeps; once it drops below ``final_temp``
the schedule is over and, budget permitting, the search restarts from a
fresh uniform assignment while the global incumbent is kept.

The starting temperature defaults to the largest |delta| among
``probe_flips`` uniformly probed flips of the initial assignment, which
makes nearly every initial proposal acceptable.

Budgeting: the quota unit is sweeps (0 quota = score the initial assignment
only). Under a wall-clock budget the loop stops when the time left is
shorter than the previous sweep took, so runs stay within their allowance
rather than overshooting it; the duration of one further sweep is the worst
case when that estimate is wrong.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..qubo import Qubo
from .base import Deadline, MinimizeOutcome, SolverBudget, TraceFn, format_params
from .kernels import neighbor_sums, sa_sweep
from .random_cut import draw_uniform_assignment

__all__ = ["SimulatedAnnealingSolver"]


@dataclass(frozen=True)
class SimulatedAnnealingSolver:
    initial_temp: float | None = None  # None: probe the start for max |delta|
    probe_flips: int = 1000
    cooling: float = 0.99
    final_temp: float = 0.01
    sweeps_per_temp: int = 1

    name = "sa"

    def __post_init__(self):
        if self.initial_temp is not None and self.initial_temp <= 0:
            raise ValueError("initial_temp must be > 0")
        if self.probe_flips < 1:
            raise ValueError("probe_flips must be >= 1")
        if not (0 < self.cooling <= 1):
            raise ValueError("cooling must lie in (0, 1]")
        if self.final_temp <= 0:
            raise ValueError("final_temp must be > 0")
        if self.sweeps_per_temp < 1:
            raise ValueError("sweeps_per_temp must be >= 1")

    def params(self) -> dict:
        return {
            "initial_temp": "probe" if self.initial_temp is None else self.initial_temp,
            "probe_flips": self.probe_flips,
            "cooling": self.cooling,
            "final_temp": self.final_temp,
            "sweeps_per_temp": self.sweeps_per_temp,
        }

    @property
    def solver_id(self) -> str:
        return format_params(self.name, self.params())

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
        sweeps_done = 0
        if trace is not None:
            trace(sweeps_done, best_e)

        quota = budget.quota
        if quota == 0:
            return MinimizeOutcome(best_x, 0, False, "quota 0: initial assignment only")

        temperature = self._starting_temperature(rng, x, arr, s)
        t0 = temperature
        sweeps_at_temp = 0
        x_prev = np.empty_like(x)
        accepted = np.empty(n, dtype=np.int64)
        last_sweep_s = 0.0
        restart_cost_s = 0.0

        while True:
            if quota is not None:
                if sweeps_done >= quota:
                    break
            elif deadline.remaining() <= last_sweep_s:
                break

            tick = time.perf_counter()
            np.copyto(x_prev, x)
            e_before = energy
            urand = rng.random(n)
            idx = rng.integers(0, n, n, dtype=np.int64)
            de, n_acc, best_de, best_k = sa_sweep(
                arr.indptr, arr.indices, arr.weights, arr.diag, x, s, temperature, urand, idx, accepted
            )
            energy = e_before + de
            sweeps_done += 1
            sweeps_at_temp += 1
            if e_before + best_de < best_e:
                best_e = e_before + best_de
                best_x = x_prev.copy()
                for i in accepted[:best_k]:
                    best_x[i] ^= 1
                if trace is not None:
                    trace(sweeps_done, best_e)
            last_sweep_s = time.perf_counter() - tick

            if sweeps_at_temp >= self.sweeps_per_temp:
                temperature *= self.cooling
                sweeps_at_temp = 0
            if temperature < self.final_temp:
                # schedule exhausted: restart from a fresh uniform assignment.
                # The state rebuild is O(couplings); skip it when the budget
                # would expire before the new schedule gets to run.
                if quota is None and deadline.remaining() <= restart_cost_s + last_sweep_s:
                    break
                tick = time.perf_counter()
                x = draw_uniform_assignment(rng, n)
                s = neighbor_sums(arr.indptr, arr.indices, arr.weights, x)
                energy = float(qubo.energy(x))
                if energy < best_e:
                    best_e = energy
                    best_x = x.copy()
                    if trace is not None:
                        trace(sweeps_done, best_e)
                temperature = t0
                sweeps_at_temp = 0
                restart_cost_s = max(restart_cost_s, time.perf_counter() - tick)

        return MinimizeOutcome(best_x, sweeps_done, False, "")

    def _starting_temperature(self, rng: np.random.Generator, x: np.ndarray, arr, s: np.ndarray) -> float:
        if self.initial_temp is not None:
            return float(self.initial_temp)
        probes = rng.integers(0, x.shape[0], self.probe_flips, dtype=np.int64)
        deltas = (1.0 - 2.0 * x[probes]) * (arr.diag[probes] + s[probes])
        peak = float(np.abs(deltas).max()) if deltas.size else 0.0
        return max(peak, 1e-9)
