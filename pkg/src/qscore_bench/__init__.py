"""Q-score benchmarking toolkit for Max-Cut/QUBO solvers.

Generates seeded Erdős–Rényi Max-Cut instances, runs time-budgeted solvers
on them (exact enumeration, random baseline, simulated annealing,
decomposition tabu search, or a remote HTTP service), evaluates the
quality ratio beta(N) against the random-cut baseline, and sweeps problem
sizes to report the Q-score: the largest size still solved significantly
better than random within the time budget.
"""

from .graphs import GraphInstance, GraphParseError, cut_cost, generate_er_graph, parse_graph, serialize_graph
from .qubo import (
    NeighborhoodCache,
    Qubo,
    energy,
    extract_subqubo,
    flip_delta,
    maxcut_to_qubo,
    qubo_from_json,
    qubo_to_json,
)
from .protocol import (
    BetaParams,
    OracleTable,
    ScoringError,
    SizeRecord,
    StopReason,
    SweepReport,
    SweepSchedule,
    beta,
    build_oracle,
    cmax_approx,
    evaluate_size,
    random_cut_baseline,
    run_sweep,
)
from .solvers import (
    ExactSolver,
    RandomCutSolver,
    SimulatedAnnealingSolver,
    Solver,
    SolverBudget,
    SolverRun,
    SolverStatus,
    TabuDecompositionSolver,
    make_solver,
    solve,
)
from .remote import LoopbackSolverServer, RemoteSolver, RemoteSolverEndpoint, remote_solve

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graphs
    "GraphInstance",
    "GraphParseError",
    "generate_er_graph",
    "cut_cost",
    "serialize_graph",
    "parse_graph",
    # qubo
    "Qubo",
    "NeighborhoodCache",
    "maxcut_to_qubo",
    "energy",
    "flip_delta",
    "extract_subqubo",
    "qubo_to_json",
    "qubo_from_json",
    # solvers
    "Solver",
    "SolverBudget",
    "SolverRun",
    "SolverStatus",
    "ExactSolver",
    "RandomCutSolver",
    "SimulatedAnnealingSolver",
    "TabuDecompositionSolver",
    "make_solver",
    "solve",
    # protocol
    "BetaParams",
    "SizeRecord",
    "SweepSchedule",
    "SweepReport",
    "StopReason",
    "ScoringError",
    "OracleTable",
    "beta",
    "cmax_approx",
    "random_cut_baseline",
    "evaluate_size",
    "build_oracle",
    "run_sweep",
    # remote
    "RemoteSolverEndpoint",
    "RemoteSolver",
    "remote_solve",
    "LoopbackSolverServer",
]
