"""Benchmarking a solver behind HTTP: the wire protocol, trust-but-verify.

External annealing services plug in through one POST per instance carrying
the QUBO plus the budget. The client re-evaluates every claimed energy
locally; anything that fails (transport, timeout, wrong energy) scores as
"no result" -> beta 0, and the sweep keeps going. Here the "service" is a
loopback server wrapping the in-process annealer.
"""

from qscore_bench import (
    LoopbackSolverServer,
    RemoteSolver,
    RemoteSolverEndpoint,
    SimulatedAnnealingSolver,
    SolverBudget,
    generate_er_graph,
    maxcut_to_qubo,
    remote_solve,
    solve,
)

sa = SimulatedAnnealingSolver()
g = generate_er_graph(40, 0.5, seed=99)
q = maxcut_to_qubo(g)
budget = SolverBudget.deterministic(250, seed=3)

with LoopbackSolverServer(sa) as server:
    print(f"loopback solver listening at {server.url}")

    # low-level: one QUBO in, one validated result out
    run = remote_solve(RemoteSolverEndpoint(url=server.url), q, budget)
    print(f"remote result: cut={run.best_cut} status={run.status.value}")

    # the same endpoint as a regular solver in the benchmark harness
    remote = RemoteSolver(RemoteSolverEndpoint(url=server.url))
    via_remote = solve(remote, g, budget)
    in_process = solve(sa, g, budget)
    print(f"via HTTP: {via_remote.best_cut}   in-process: {in_process.best_cut}   (identical seeds)")
    assert via_remote.best_cut == in_process.best_cut

# A server that lies about energies is caught by local re-evaluation.
class Corrupt(LoopbackSolverServer):
    def handle_request(self, payload):
        reply = super().handle_request(payload)
        if "energy" in reply:
            reply["energy"] -= 2
        return reply

with Corrupt(sa) as server:
    run = remote_solve(RemoteSolverEndpoint(url=server.url), q, budget)
    print(f"\ncorrupted server: status={run.status.value}, detail={run.detail!r}")

# An unreachable endpoint degrades the same way instead of raising.
dead = RemoteSolverEndpoint(url="http://127.0.0.1:9", request_timeout_s=1.0)
run = remote_solve(dead, q, budget)
print(f"unreachable endpoint: status={run.status.value}, detail={run.detail!r}")
