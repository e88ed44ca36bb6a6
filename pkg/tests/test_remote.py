import json
import time

import numpy as np
import pytest

from qscore_bench import (
    BetaParams,
    LoopbackSolverServer,
    RemoteSolver,
    RemoteSolverEndpoint,
    SimulatedAnnealingSolver,
    SolverBudget,
    SolverStatus,
    SweepSchedule,
    cut_cost,
    evaluate_size,
    generate_er_graph,
    maxcut_to_qubo,
    remote_solve,
    run_sweep,
    solve,
)
from qscore_bench.remote import TOKEN_ENV_VAR
from qscore_bench.solvers.base import Deadline


@pytest.fixture(scope="module")
def sa_server():
    with LoopbackSolverServer(SimulatedAnnealingSolver()) as server:
        yield server


def test_remote_solve_matches_in_process(sa_server):
    g = generate_er_graph(30, 0.5, seed=77)
    q = maxcut_to_qubo(g)
    budget = SolverBudget.deterministic(300, seed=13)
    remote_run = remote_solve(RemoteSolverEndpoint(url=sa_server.url), q, budget)
    local = SimulatedAnnealingSolver().minimize(q, budget, Deadline(None))
    assert remote_run.status is SolverStatus.BUDGET_EXCEEDED_WITH_RESULT
    assert remote_run.best_cut == cut_cost(g, local.assignment)
    assert np.array_equal(remote_run.best_assignment, local.assignment)


def test_remote_solver_through_the_harness(sa_server):
    g = generate_er_graph(25, 0.5, seed=5)
    budget = SolverBudget.deterministic(200, seed=4)
    via_remote = solve(RemoteSolver(RemoteSolverEndpoint(url=sa_server.url)), g, budget)
    in_process = solve(SimulatedAnnealingSolver(), g, budget)
    assert via_remote.best_cut == in_process.best_cut
    assert via_remote.best_cut == cut_cost(g, via_remote.best_assignment)


def test_remote_transport_failure_is_no_result():
    endpoint = RemoteSolverEndpoint(url="http://127.0.0.1:9", request_timeout_s=1.0)
    q = maxcut_to_qubo(generate_er_graph(10, 0.5, seed=1))
    run = remote_solve(endpoint, q, SolverBudget.deterministic(10, seed=0))
    assert run.status is SolverStatus.NO_RESULT
    assert "transport" in run.detail


def test_remote_timeout_is_no_result():
    class Sleepy(LoopbackSolverServer):
        def handle_request(self, payload):
            time.sleep(2.0)
            return super().handle_request(payload)

    q = maxcut_to_qubo(generate_er_graph(10, 0.5, seed=2))
    with Sleepy(SimulatedAnnealingSolver()) as server:
        endpoint = RemoteSolverEndpoint(url=server.url, request_timeout_s=0.3)
        run = remote_solve(endpoint, q, SolverBudget.deterministic(10, seed=0))
    assert run.status is SolverStatus.NO_RESULT
    assert run.detail == "timeout"


def test_remote_energy_mismatch_is_no_result():
    class Corrupt(LoopbackSolverServer):
        def handle_request(self, payload):
            reply = super().handle_request(payload)
            if "energy" in reply:
                reply["energy"] += 1
            return reply

    q = maxcut_to_qubo(generate_er_graph(12, 0.5, seed=3))
    with Corrupt(SimulatedAnnealingSolver()) as server:
        run = remote_solve(RemoteSolverEndpoint(url=server.url), q, SolverBudget.deterministic(20, seed=1))
    assert run.status is SolverStatus.NO_RESULT
    assert "energy mismatch" in run.detail


def test_remote_invalid_assignment_is_no_result():
    class Mangle(LoopbackSolverServer):
        def handle_request(self, payload):
            reply = super().handle_request(payload)
            if "assignment" in reply:
                reply["assignment"] = reply["assignment"][:-1]
            return reply

    q = maxcut_to_qubo(generate_er_graph(12, 0.5, seed=4))
    with Mangle(SimulatedAnnealingSolver()) as server:
        run = remote_solve(RemoteSolverEndpoint(url=server.url), q, SolverBudget.deterministic(20, seed=1))
    assert run.status is SolverStatus.NO_RESULT
    assert "invalid assignment" in run.detail


def test_remote_no_result_reason_passes_through():
    class Refusing(LoopbackSolverServer):
        def handle_request(self, payload):
            return {"status": "no_result", "reason": "embedding failed"}

    q = maxcut_to_qubo(generate_er_graph(12, 0.5, seed=5))
    with Refusing(SimulatedAnnealingSolver()) as server:
        run = remote_solve(RemoteSolverEndpoint(url=server.url), q, SolverBudget.deterministic(20, seed=1))
    assert run.status is SolverStatus.NO_RESULT
    assert run.detail == "embedding failed"


def test_failing_remote_does_not_abort_a_sweep():
    solver = RemoteSolver(RemoteSolverEndpoint(url="http://127.0.0.1:9", request_timeout_s=0.5))
    params = BetaParams(m_instances=3)
    report = run_sweep(solver, SweepSchedule(10, 5, 20), params, SolverBudget.deterministic(5, seed=1), seed_base=2)
    assert report.records[0].no_result_count == 3
    assert report.records[0].beta == 0.0
    assert report.qscore is None


def test_wire_format_carries_budget_and_seed(sa_server):
    captured = {}

    class Spy(LoopbackSolverServer):
        def handle_request(self, payload):
            captured.update(payload)
            return super().handle_request(payload)

    q = maxcut_to_qubo(generate_er_graph(8, 0.5, seed=6))
    with Spy(SimulatedAnnealingSolver()) as server:
        remote_solve(RemoteSolverEndpoint(url=server.url), q, SolverBudget.deterministic(7, seed=42))
    assert captured["n"] == 8
    assert captured["quota"] == 7 and captured["seed"] == 42
    assert captured["time_limit_ms"] is None
    assert all(i <= j for i, j, _ in captured["terms"])


def test_bearer_token_comes_from_the_environment(monkeypatch):
    seen = {}
    q = maxcut_to_qubo(generate_er_graph(6, 0.5, seed=7))

    # capture the Authorization header via a tiny handler
    import http.server, threading

    class Handler(http.server.BaseHTTPRequestHandler):
        def do_POST(self):
            seen["auth"] = self.headers.get("Authorization")
            body = json.dumps({"status": "no_result", "reason": "spy"}).encode()
            self.send_response(200)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    try:
        url = f"http://127.0.0.1:{httpd.server_address[1]}"
        monkeypatch.setenv(TOKEN_ENV_VAR, "sekrit")
        remote_solve(RemoteSolverEndpoint(url=url), q, SolverBudget.deterministic(1, seed=0))
    finally:
        httpd.shutdown()
        httpd.server_close()
    assert seen["auth"] == "Bearer sekrit"


def test_request_timeout_covers_budget_plus_margin():
    endpoint = RemoteSolverEndpoint(url="http://example.invalid")
    wall = SolverBudget.wall_clock(5_000)
    assert endpoint.timeout_for(wall) >= 5.0 + 5.0
    fixed = RemoteSolverEndpoint(url="http://example.invalid", request_timeout_s=3.0)
    assert fixed.timeout_for(wall) == 3.0


def test_evaluate_size_validates_remote_cuts_locally(sa_server):
    # the record's cuts come from local cut_cost on the returned assignment
    params = BetaParams(m_instances=3)
    budget = SolverBudget.deterministic(100, seed=3)
    via_remote = evaluate_size(RemoteSolver(RemoteSolverEndpoint(url=sa_server.url)), 20, params, budget, seed_base=5)
    in_process = evaluate_size(SimulatedAnnealingSolver(), 20, params, budget, seed_base=5)
    assert via_remote.mean_cut == in_process.mean_cut
    assert via_remote.beta == in_process.beta
