"""Reference solvers and the registry used by the CLI and the sweep config.

Solver parameters arrive as ``key=value`` strings; each solver validates its
own set and echoes the effective values (defaults included) in solver_id.
"""

from __future__ import annotations

import dataclasses
import typing

from .annealing import SimulatedAnnealingSolver
from .base import (
    Deadline,
    MinimizeOutcome,
    Solver,
    SolverBudget,
    SolverRun,
    SolverStatus,
    TraceFn,
    solve,
    splitmix64,
)
from .exact import ExactSolver
from .random_cut import RandomCutSolver
from .tabu import TabuDecompositionSolver

__all__ = [
    "Deadline",
    "MinimizeOutcome",
    "Solver",
    "SolverBudget",
    "SolverRun",
    "SolverStatus",
    "TraceFn",
    "solve",
    "splitmix64",
    "ExactSolver",
    "RandomCutSolver",
    "SimulatedAnnealingSolver",
    "TabuDecompositionSolver",
    "SOLVER_NAMES",
    "make_solver",
    "parse_param_overrides",
]

_BUILTIN = {
    "exact": ExactSolver,
    "random": RandomCutSolver,
    "sa": SimulatedAnnealingSolver,
    "tabu": TabuDecompositionSolver,
}

SOLVER_NAMES = ("exact", "random", "sa", "tabu", "remote")


class UnknownSolverError(ValueError):
    pass


def make_solver(name: str, params: dict[str, object] | None = None) -> Solver:
    """Instantiate a registered solver from a name and parameter overrides."""
    params = dict(params or {})
    if name == "remote":
        from ..remote import RemoteSolver, RemoteSolverEndpoint

        url = params.pop("url", None)
        if not url:
            raise ValueError("remote solver requires a url=... parameter")
        timeout = params.pop("request_timeout_s", None)
        if params:
            raise ValueError(f"unknown remote solver parameters: {sorted(params)}")
        endpoint = RemoteSolverEndpoint(
            url=str(url),
            request_timeout_s=None if timeout is None else float(timeout),
        )
        return RemoteSolver(endpoint)

    cls = _BUILTIN.get(name)
    if cls is None:
        raise UnknownSolverError(f"unknown solver {name!r}; available: {', '.join(SOLVER_NAMES)}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in params.items():
        if key not in fields:
            raise ValueError(f"solver {name!r} has no parameter {key!r}; available: {sorted(fields)}")
        kwargs[key] = _coerce(value, fields[key].type, key)
    return cls(**kwargs)


def parse_param_overrides(pairs: list[str] | None) -> dict[str, str]:
    """Split repeated ``key=value`` CLI arguments into a dict."""
    out: dict[str, str] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"expected key=value, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def _coerce(value: object, annotation: object, key: str):
    if not isinstance(value, str):
        return value
    ann = str(annotation)
    try:
        if "int" in ann and "None" in ann and value.lower() in ("none", ""):
            return None
        if "float" in ann and "None" in ann and value.lower() in ("none", ""):
            return None
        if ann.startswith("int") or ann == "int | None":
            return int(value)
        if ann.startswith("float") or ann == "float | None":
            return float(value)
        if ann.startswith("bool"):
            if value.lower() in ("1", "true", "yes"):
                return True
            if value.lower() in ("0", "false", "no"):
                return False
            raise ValueError(value)
    except ValueError:
        raise ValueError(f"cannot parse {value!r} for parameter {key!r} ({ann})") from None
    return value
