"""JSON-over-HTTP client for external QUBO solvers, plus a loopback server.

One POST per problem instance. Request body is the QUBO wire form extended
with the budget:

    {"n": int, "constant": number, "terms": [[i, j, coeff], ...],
     "time_limit_ms": number | null,
     "quota": int | null, "seed": int}        (quota/seed: deterministic runs)

Expected response, HTTP 200 either way:

    {"assignment": [0, 1, ...], "energy": number}
    {"status": "no_result", "reason": "..."}

The client trusts nothing: the claimed energy is re-evaluated locally and a
mismatch, like any transport failure, timeout, or malformed payload, maps to
a NO_RESULT run with the reason recorded. The benchmark keeps scoring (such
instances count as random-baseline cost); remote problems never abort a
sweep.

Authentication is a bearer token read from the QSCORE_REMOTE_TOKEN
environment variable only; it is never persisted in configs or reports.

:class:`LoopbackSolverServer` wraps any in-process solver behind this wire
protocol. It exists so integrations can be exercised end to end without an
external service, and doubles as the reference implementation for adapters
around vendor SDKs.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import requests

from .qubo import Qubo, qubo_from_json
from .solvers.base import (
    Deadline,
    MinimizeOutcome,
    SolverBudget,
    SolverRun,
    SolverStatus,
    format_params,
)

__all__ = [
    "RemoteSolverEndpoint",
    "RemoteSolver",
    "remote_solve",
    "LoopbackSolverServer",
    "TOKEN_ENV_VAR",
]

TOKEN_ENV_VAR = "QSCORE_REMOTE_TOKEN"
DEFAULT_TIMEOUT_MARGIN_S = 10.0

# energies are integers for Max-Cut models; the tolerance only matters for
# general float QUBOs
ENERGY_RTOL = 1e-6


@dataclass(frozen=True)
class RemoteSolverEndpoint:
    """Where to POST instances. The request timeout must cover the solver
    budget plus transport margin; when unset it is derived per request."""

    url: str
    request_timeout_s: float | None = None

    def timeout_for(self, budget: SolverBudget) -> float:
        if self.request_timeout_s is not None:
            return self.request_timeout_s
        if budget.wall_ms is not None:
            return budget.wall_ms / 1000.0 + DEFAULT_TIMEOUT_MARGIN_S
        return 60.0 + DEFAULT_TIMEOUT_MARGIN_S

    @staticmethod
    def token() -> str | None:
        return os.environ.get(TOKEN_ENV_VAR)


def _request_payload(q: Qubo, budget: SolverBudget) -> dict:
    return {
        "n": q.n,
        "constant": q.constant,
        "terms": [[i, j, c] for (i, j), c in sorted(q.terms.items())],
        "time_limit_ms": budget.wall_ms,
        "quota": budget.quota,
        "seed": budget.seed,
    }


def _fetch_solution(endpoint: RemoteSolverEndpoint, q: Qubo, budget: SolverBudget) -> tuple[np.ndarray | None, str]:
    """Returns (validated assignment, reason-if-none)."""
    headers = {"Content-Type": "application/json"}
    token = endpoint.token()
    if token:
        headers["Authorization"] = f"Bearer {token}"
    try:
        resp = requests.post(
            endpoint.url,
            json=_request_payload(q, budget),
            headers=headers,
            timeout=endpoint.timeout_for(budget),
        )
    except requests.Timeout:
        return None, "timeout"
    except requests.RequestException as exc:
        return None, f"transport: {type(exc).__name__}"
    if resp.status_code != 200:
        return None, f"http {resp.status_code}"
    try:
        body = resp.json()
    except ValueError:
        return None, "malformed response: not JSON"

    if isinstance(body, dict) and body.get("status") == "no_result":
        return None, str(body.get("reason", "remote reported no result"))
    if not isinstance(body, dict) or "assignment" not in body or "energy" not in body:
        return None, "malformed response: missing assignment/energy"

    try:
        assignment = np.asarray(body["assignment"], dtype=np.int64)
        claimed = float(body["energy"])
    except (TypeError, ValueError):
        return None, "malformed response: bad types"
    if assignment.ndim != 1 or assignment.shape[0] != q.n or not np.isin(assignment, (0, 1)).all():
        return None, "invalid assignment"

    local = float(q.energy(assignment.astype(np.uint8)))
    if abs(local - claimed) > ENERGY_RTOL * max(1.0, abs(local)):
        return None, f"energy mismatch: claimed {claimed}, recomputed {local}"
    return assignment.astype(np.uint8), ""


def remote_solve(endpoint: RemoteSolverEndpoint, q: Qubo, budget: SolverBudget) -> SolverRun:
    """One remote solve of a QUBO, validated locally.

    ``best_cut`` is the negated (locally recomputed) energy, the cut value
    for Max-Cut-form QUBOs. Every failure mode yields status NO_RESULT with
    the reason in ``detail``; this function does not raise on remote or
    transport problems.
    """
    started = time.perf_counter()
    assignment, reason = _fetch_solution(endpoint, q, budget)
    elapsed_ms = 0.0 if budget.is_deterministic else (time.perf_counter() - started) * 1000.0
    solver_id = format_params("remote", {"url": endpoint.url})
    if assignment is None:
        return SolverRun(None, 0, elapsed_ms, SolverStatus.NO_RESULT, solver_id, 0, reason)
    cut = max(0, int(round(-float(q.energy(assignment)))))
    return SolverRun(assignment, cut, elapsed_ms, SolverStatus.BUDGET_EXCEEDED_WITH_RESULT, solver_id, 1, "")


@dataclass(frozen=True)
class RemoteSolver:
    """Adapter that lets an HTTP endpoint sit behind the uniform interface."""

    endpoint: RemoteSolverEndpoint

    name = "remote"

    def params(self) -> dict:
        return {"url": self.endpoint.url}

    @property
    def solver_id(self) -> str:
        return format_params(self.name, self.params())

    def minimize(
        self, qubo: Qubo, budget: SolverBudget, deadline: Deadline, trace=None
    ) -> MinimizeOutcome:
        assignment, reason = _fetch_solution(self.endpoint, qubo, budget)
        if assignment is None:
            return MinimizeOutcome(None, 0, False, reason)
        if trace is not None:
            trace(1, float(qubo.energy(assignment)))
        return MinimizeOutcome(assignment, 1, False, "")


class LoopbackSolverServer:
    """Serves the wire protocol from an in-process solver, for tests/demos.

    The budget is taken from each request (quota/seed when present, else the
    time limit). Start/stop explicitly or use it as a context manager; the
    URL to post to is ``server.url``.
    """

    def __init__(self, solver, host: str = "127.0.0.1", port: int = 0):
        self._solver = solver
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):  # noqa: N802  (http.server API)
                length = int(self.headers.get("Content-Length", 0))
                try:
                    payload = json.loads(self.rfile.read(length))
                    reply = outer.handle_request(payload)
                except Exception as exc:  # malformed request -> structured refusal
                    reply = {"status": "no_result", "reason": f"server error: {exc}"}
                blob = json.dumps(reply).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(blob)))
                self.end_headers()
                self.wfile.write(blob)

            def log_message(self, *args):  # silence per-request stderr noise
                pass

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    def handle_request(self, payload: dict) -> dict:
        q = qubo_from_json(payload)
        seed = int(payload.get("seed", 0))
        if payload.get("quota") is not None:
            budget = SolverBudget.deterministic(int(payload["quota"]), seed)
        elif payload.get("time_limit_ms") is not None:
            budget = SolverBudget.wall_clock(float(payload["time_limit_ms"]), seed)
        else:
            return {"status": "no_result", "reason": "no budget in request"}
        deadline = Deadline.from_budget(budget, time.perf_counter())
        outcome = self._solver.minimize(q, budget, deadline)
        if outcome.assignment is None:
            return {"status": "no_result", "reason": outcome.detail or "solver produced nothing"}
        assignment = [int(v) for v in outcome.assignment]
        return {"assignment": assignment, "energy": q.energy(outcome.assignment)}

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "LoopbackSolverServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self) -> "LoopbackSolverServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
