import time

import numpy as np
import pytest

from qscore_bench import (
    ExactSolver,
    RandomCutSolver,
    SimulatedAnnealingSolver,
    SolverBudget,
    SolverStatus,
    TabuDecompositionSolver,
    cut_cost,
    generate_er_graph,
    solve,
)
from qscore_bench.solvers import make_solver, parse_param_overrides, splitmix64
from conftest import brute_force_maxcut


def test_budget_validation():
    with pytest.raises(ValueError):
        SolverBudget()
    with pytest.raises(ValueError):
        SolverBudget(wall_ms=100, quota=5)
    with pytest.raises(ValueError):
        SolverBudget.wall_clock(0)
    with pytest.raises(ValueError):
        SolverBudget.deterministic(-1)
    with pytest.raises(ValueError):
        SolverBudget.deterministic(1, seed=-2)
    assert SolverBudget.deterministic(0).quota == 0  # "initial point only" is allowed
    assert SolverBudget.wall_clock(50).is_deterministic is False


def test_exact_on_k4(k4):
    run = solve(ExactSolver(), k4, SolverBudget.wall_clock(5_000))
    assert run.best_cut == 4
    assert run.status is SolverStatus.SOLVED
    assert cut_cost(k4, run.best_assignment) == 4


def test_exact_on_empty_graph(empty6):
    run = solve(ExactSolver(), empty6, SolverBudget.wall_clock(1_000))
    assert run.best_cut == 0 and run.status is SolverStatus.SOLVED


def test_exact_matches_independent_enumeration():
    for seed in range(10):
        g = generate_er_graph(10, 0.5, seed=300 + seed)
        run = solve(ExactSolver(), g, SolverBudget.wall_clock(10_000))
        assert run.status is SolverStatus.SOLVED
        assert run.best_cut == brute_force_maxcut(g)


def test_exact_budget_paths():
    g = generate_er_graph(40, 0.5, seed=1)
    run = solve(ExactSolver(), g, SolverBudget.deterministic(0))
    assert run.status is SolverStatus.NO_RESULT
    assert run.best_assignment is None

    run = solve(ExactSolver(), g, SolverBudget.deterministic(1000))
    assert run.status is SolverStatus.BUDGET_EXCEEDED_WITH_RESULT
    assert run.iterations == 1000
    assert run.best_cut == cut_cost(g, run.best_assignment)

    # a wall budget too small to even set up the enumeration
    big = generate_er_graph(400, 0.5, seed=2)
    run = solve(ExactSolver(), big, SolverBudget.wall_clock(1.0))
    assert run.status is SolverStatus.NO_RESULT


def test_random_solver_empty_graph(empty6):
    run = solve(RandomCutSolver(), empty6, SolverBudget.deterministic(1, seed=0))
    assert run.best_cut == 0 and run.status is SolverStatus.SOLVED


def test_random_solver_k2_mean_over_seeds():
    g = generate_er_graph(2, 1, seed=0)
    cuts = [
        solve(RandomCutSolver(), g, SolverBudget.deterministic(1, seed=s)).best_cut
        for s in range(1000)
    ]
    assert abs(np.mean(cuts) - 0.5) < 0.05


def test_random_solver_mean_cut_near_quarter_of_pairs():
    # draws over 100 instances at n=200: mean cut within 3 empirical SEs of n(n-1)/8
    cuts = []
    for s in range(100):
        g = generate_er_graph(200, 0.5, seed=7000 + s)
        cuts.append(solve(RandomCutSolver(), g, SolverBudget.deterministic(1, seed=s)).best_cut)
    expect = 200 * 199 / 8
    stderr = np.std(cuts, ddof=1) / 10
    assert abs(np.mean(cuts) - expect) < 3 * stderr


def test_sa_deterministic_purity():
    g = generate_er_graph(50, 0.5, seed=8)
    budget = SolverBudget.deterministic(400, seed=21)
    a = solve(SimulatedAnnealingSolver(), g, budget)
    b = solve(SimulatedAnnealingSolver(), g, budget)
    assert a.best_cut == b.best_cut
    assert np.array_equal(a.best_assignment, b.best_assignment)
    assert a.elapsed_ms == b.elapsed_ms == 0.0
    assert a.iterations == 400


def test_sa_monotone_in_quota():
    g = generate_er_graph(64, 0.5, seed=11)
    cuts = [
        solve(SimulatedAnnealingSolver(), g, SolverBudget.deterministic(q, seed=7)).best_cut
        for q in (0, 5, 25, 100, 400)
    ]
    assert cuts == sorted(cuts)


def test_sa_quota_zero_equals_random_draw():
    g = generate_er_graph(33, 0.5, seed=5)
    sa = solve(SimulatedAnnealingSolver(), g, SolverBudget.deterministic(0, seed=99))
    rnd = solve(RandomCutSolver(), g, SolverBudget.deterministic(1, seed=99))
    assert sa.best_cut == rnd.best_cut
    assert np.array_equal(sa.best_assignment, rnd.best_assignment)


def test_sa_solves_k4_quickly(k4):
    hits = sum(
        solve(SimulatedAnnealingSolver(), k4, SolverBudget.wall_clock(100, seed=s)).best_cut == 4
        for s in range(100)
    )
    assert hits >= 99


def test_sa_empty_graph_terminates(empty6):
    run = solve(SimulatedAnnealingSolver(), empty6, SolverBudget.deterministic(10, seed=1))
    assert run.best_cut == 0


def test_sa_infinite_temperature_is_an_unbiased_walk():
    # at infinite temperature every proposal is accepted, so the sweep walk's
    # stationary distribution is uniform and the mean visited cut is m/2
    from qscore_bench.qubo import maxcut_to_qubo
    from qscore_bench.solvers.kernels import neighbor_sums, sa_sweep

    g = generate_er_graph(60, 0.5, seed=3)
    q = maxcut_to_qubo(g)
    arr = q.arrays()
    rng = np.random.default_rng(17)
    x = rng.integers(0, 2, g.n).astype(np.uint8)
    s = neighbor_sums(arr.indptr, arr.indices, arr.weights, x)
    e = float(q.energy(x))
    accepted = np.empty(g.n, dtype=np.int64)
    sweeps = 800
    visited = np.empty(sweeps)
    for k in range(sweeps):
        de, *_ = sa_sweep(
            arr.indptr, arr.indices, arr.weights, arr.diag, x, s, 1e18,
            rng.random(g.n), rng.integers(0, g.n, g.n, dtype=np.int64), accepted,
        )
        e += de
        visited[k] = -e  # cut of the state at the end of sweep k
    m_edges = g.num_edges
    stderr = np.std(visited, ddof=1) / sweeps**0.5
    assert abs(visited.mean() - m_edges / 2) < 5 * stderr


def test_monotone_incumbent_trace():
    g = generate_er_graph(40, 0.5, seed=14)
    for solver in (ExactSolver(), SimulatedAnnealingSolver(), TabuDecompositionSolver()):
        seen = []
        solve(solver, g, SolverBudget.deterministic(200, seed=3), trace=lambda it, e: seen.append(e))
        assert seen, solver.name
        assert all(a >= b for a, b in zip(seen, seen[1:])), solver.name


def test_wallclock_overshoot_stays_bounded():
    g = generate_er_graph(300, 0.5, seed=4)
    run = solve(SimulatedAnnealingSolver(), g, SolverBudget.wall_clock(300, seed=1))
    assert run.status is SolverStatus.BUDGET_EXCEEDED_WITH_RESULT
    assert run.elapsed_ms <= 300 + 150  # one loop of slack, generously


def test_tabu_overshoot_reported_honestly():
    # one outer pass at this size takes far longer than the budget; the
    # elapsed time must say so rather than being clamped to the budget
    g = generate_er_graph(800, 0.5, seed=6)
    run = solve(TabuDecompositionSolver(), g, SolverBudget.wall_clock(10, seed=1))
    assert run.elapsed_ms > 10
    assert run.best_cut == cut_cost(g, run.best_assignment)


def test_tabu_pure_matches_exact():
    hits = 0
    tabu = TabuDecompositionSolver(subproblem_size=12)
    for i in range(30):
        g = generate_er_graph(12, 0.5, seed=2000 + i)
        best = solve(ExactSolver(), g, SolverBudget.wall_clock(10_000)).best_cut
        run = solve(tabu, g, SolverBudget.deterministic(30, seed=i))
        hits += run.best_cut == best
    assert hits >= 28


def test_tabu_decomposed_and_direct_paths_both_valid():
    g = generate_er_graph(12, 0.5, seed=77)
    for size in (12, 6):
        run = solve(TabuDecompositionSolver(subproblem_size=size), g, SolverBudget.deterministic(20, seed=1))
        assert run.best_assignment.shape == (12,)
        assert set(np.unique(run.best_assignment)) <= {0, 1}
        assert run.best_cut == cut_cost(g, run.best_assignment)


def test_tabu_empty_graph_solves_immediately(empty6):
    run = solve(TabuDecompositionSolver(), empty6, SolverBudget.wall_clock(1_000, seed=0))
    assert run.best_cut == 0
    assert run.status is SolverStatus.SOLVED


def test_every_solver_returns_a_valid_cut():
    g = generate_er_graph(25, 0.5, seed=12)
    for solver in (ExactSolver(), RandomCutSolver(), SimulatedAnnealingSolver(), TabuDecompositionSolver()):
        run = solve(solver, g, SolverBudget.deterministic(40, seed=2))
        assert run.best_assignment.shape == (25,)
        assert run.best_cut == cut_cost(g, run.best_assignment)


def test_solver_id_echoes_effective_parameters():
    sa = SimulatedAnnealingSolver(cooling=0.95)
    assert "cooling=0.95" in sa.solver_id
    assert "final_temp=0.01" in sa.solver_id  # default still echoed
    tabu = TabuDecompositionSolver()
    assert "subproblem_size=48" in tabu.solver_id
    assert "inner_iterations=2400" in tabu.solver_id


def test_make_solver_and_param_parsing():
    overrides = parse_param_overrides(["cooling=0.9", "probe_flips=10"])
    sa = make_solver("sa", overrides)
    assert sa.cooling == 0.9 and sa.probe_flips == 10
    with pytest.raises(ValueError):
        make_solver("sa", {"bogus": "1"})
    with pytest.raises(ValueError):
        make_solver("nope")
    with pytest.raises(ValueError):
        parse_param_overrides(["oops"])
    with pytest.raises(ValueError):
        make_solver("sa", {"cooling": "fast"})


def test_solver_param_validation():
    with pytest.raises(ValueError):
        SimulatedAnnealingSolver(cooling=1.5)
    with pytest.raises(ValueError):
        SimulatedAnnealingSolver(final_temp=0)
    with pytest.raises(ValueError):
        TabuDecompositionSolver(subproblem_size=0)
    with pytest.raises(ValueError):
        TabuDecompositionSolver(tenure=-1)


def test_splitmix64_is_stable():
    assert splitmix64(0) == 16294208416658607535
    assert splitmix64(splitmix64(0)) != splitmix64(0)
    assert 0 <= splitmix64(2**64 - 1) < 2**64
