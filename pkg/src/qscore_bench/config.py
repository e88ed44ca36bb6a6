"""Sweep run configuration, from flags and/or a key=value config file.

File format: one ``key = value`` per line, ``#`` comments and blank lines
ignored. Solver parameters are spelled ``param.<name> = <value>``. Keys:

    solver        exact | random | sa | tabu | remote
    param.<name>  solver parameter override
    start, step, max_n
    m             instances per size
    beta_star     qualification threshold
    cmax_mode     approximation | oracle
    oracle_table  path to an oracle table JSON (oracle mode)
    baseline      n2_over_8 | exact
    budget_ms     wall-clock budget per instance (exclusive with quota)
    quota         deterministic iteration quota per instance
    seed_base     first instance seed; also seeds the solver streams
    time_cap_ms   stop the sweep when mean time exceeds this
    workers       instance-level worker processes (keep 1 for wall budgets)
    out           parent directory for run directories

An identical config with a deterministic budget reproduces an identical
report, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .protocol import BetaParams, OracleTable, SweepSchedule
from .solvers import SolverBudget, make_solver

__all__ = ["RunConfig", "ConfigError", "parse_config_file"]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    solver: str = "sa"
    solver_params: dict = field(default_factory=dict)
    start: int = 100
    step: int = 100
    max_n: int = 10_000
    m: int = 100
    beta_star: float = 0.2
    cmax_mode: str = "approximation"
    oracle_table: str | None = None
    baseline: str = "n2_over_8"
    budget_ms: float | None = 60_000.0
    quota: int | None = None
    seed_base: int = 1
    time_cap_ms: float = 100_000.0
    workers: int = 1
    out: str = "runs"

    def beta_params(self) -> BetaParams:
        return BetaParams(
            beta_star=self.beta_star,
            m_instances=self.m,
            cmax_mode=self.cmax_mode,
            random_baseline=self.baseline,
        )

    def schedule(self) -> SweepSchedule:
        return SweepSchedule(start=self.start, step=self.step, max_n=self.max_n)

    def budget(self) -> SolverBudget:
        if (self.budget_ms is None) == (self.quota is None):
            raise ConfigError("exactly one of budget_ms/quota must be set")
        if self.quota is not None:
            return SolverBudget.deterministic(self.quota, seed=self.seed_base)
        return SolverBudget.wall_clock(self.budget_ms, seed=self.seed_base)

    def build_solver(self):
        return make_solver(self.solver, dict(self.solver_params))

    def load_oracle(self) -> OracleTable | None:
        if self.cmax_mode != "oracle":
            return None
        if not self.oracle_table:
            raise ConfigError("cmax_mode oracle requires oracle_table=<path>")
        path = Path(self.oracle_table)
        if not path.exists():
            raise ConfigError(f"oracle table not found: {path}")
        return OracleTable.load(path)

    def validate(self) -> "RunConfig":
        try:
            self.schedule()
            self.beta_params()
            self.budget()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.time_cap_ms <= 0:
            raise ConfigError("time_cap_ms must be > 0")
        return self


_INT_KEYS = {"start", "step", "max_n", "m", "quota", "seed_base", "workers"}
_FLOAT_KEYS = {"beta_star", "budget_ms", "time_cap_ms"}
_STR_KEYS = {"solver", "cmax_mode", "baseline", "out", "oracle_table"}


def parse_config_file(path: str | Path) -> RunConfig:
    config = RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if key.startswith("param."):
            config.solver_params[key[len("param."):]] = value
            continue
        try:
            if key in _INT_KEYS:
                setattr(config, key, int(value))
            elif key in _FLOAT_KEYS:
                setattr(config, key, float(value))
            elif key in _STR_KEYS:
                setattr(config, key, value)
            else:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{path}:{line_no}: bad value for {key!r}: {value!r}") from None
        if key == "quota":
            config.budget_ms = None
        elif key == "budget_ms":
            config.quota = None
    return config
