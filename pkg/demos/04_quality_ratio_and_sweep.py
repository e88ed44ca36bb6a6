"""From mean cuts to beta(N) to a Q-score sweep, with report files.

beta(N) rescales the mean best cut so 0 is random guessing and 1 is the
optimum; the Q-score is the largest N that keeps beta above 0.2 within the
time budget. This demo stays at toy sizes with deterministic budgets so it
finishes in seconds: the exact solver scores beta = 1 everywhere (against
an enumeration oracle) and random guessing stops the sweep immediately.
"""

import tempfile
from pathlib import Path

from qscore_bench import (
    BetaParams,
    ExactSolver,
    RandomCutSolver,
    SolverBudget,
    SweepSchedule,
    beta,
    build_oracle,
    cmax_approx,
    run_sweep,
)
from qscore_bench.reporting import write_report

# The closed-form optimum approximation vs the random baseline.
for n in (100, 500, 1000):
    print(f"n={n:>5}: random baseline {n*n/8:>9.0f}   approx optimum {cmax_approx(n):>9.0f}")
print(f"a solver halfway in between scores beta = {beta(100, 1339.0, cmax_approx(100), 1250.0):.2f}\n")

params = BetaParams(m_instances=10, cmax_mode="oracle")
budget = SolverBudget.deterministic(10**6, seed=0)
sizes = [6, 9, 12, 15]

# Oracle mode replaces the approximation (inaccurate at low n) with the mean
# best cut of a strong reference solver on the same seeded instances.
oracle = build_oracle(sizes, params, budget, seed_base=77, solver=ExactSolver())
print("oracle table:", oracle.cmax)

report = run_sweep(
    ExactSolver(), SweepSchedule(6, 3, 15), params, budget,
    seed_base=77, oracle=oracle, solver_name="exact",
)
for record in report.records:
    print(f"n={record.n:>3}: mean_cut={record.mean_cut:6.1f}  beta={record.beta:.3f}")
print(f"exact solver Q-score: {report.qscore_label} ({report.stop_reason})\n")

# Random guessing is the beta = 0 anchor: the sweep stops at its first size.
rand_report = run_sweep(
    RandomCutSolver(), SweepSchedule(20, 10, 60), BetaParams(m_instances=30),
    SolverBudget.deterministic(1, seed=5), seed_base=33, solver_name="random",
)
print(f"random solver Q-score: {rand_report.qscore_label} ({rand_report.stop_reason})")

with tempfile.TemporaryDirectory() as tmp:
    run_dir = write_report(report, Path(tmp))
    print(f"\nreport files: {sorted(p.name for p in run_dir.iterdir())}")
    print((run_dir / "beta_vs_n.tsv").read_text(), end="")
