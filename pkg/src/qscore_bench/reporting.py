"""Report persistence: JSON, CSV, and plot-ready data files.

A sweep run writes into its own directory, named by UTC timestamp plus a
hash of the effective config, so repeated runs append rather than overwrite:

    <out>/<YYYYmmddTHHMMSSZ>-<confighash8>/
        report.json     full SweepReport, canonical key order
        report.csv      one row per size
        beta_vs_n.tsv   n, beta, beta-stderr, beta+stderr
        time_vs_n.tsv   n, mean_ms, min_ms, max_ms

The TSV files are a pure projection of report.json: re-emitting from a
saved report reproduces them byte for byte. Error columns are interval
endpoints; for the time file they are the observed minimum and maximum.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from pathlib import Path

from .protocol import SweepReport

__all__ = [
    "report_to_json",
    "report_to_csv",
    "plotdata_beta",
    "plotdata_time",
    "write_report",
    "config_hash",
]

CSV_COLUMNS = (
    "n",
    "mean_cut",
    "std_cut",
    "beta",
    "beta_stderr",
    "mean_time_ms",
    "min_time_ms",
    "max_time_ms",
    "no_result_count",
)


def report_to_json(report: SweepReport | dict) -> str:
    obj = report.to_dict() if isinstance(report, SweepReport) else report
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _records(report: SweepReport | dict) -> list[dict]:
    if isinstance(report, SweepReport):
        return [r.to_dict() for r in report.records]
    return list(report["records"])


def report_to_csv(report: SweepReport | dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in _records(report):
        writer.writerow([rec[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def plotdata_beta(report: SweepReport | dict) -> str:
    """Quality ratio vs size with one-standard-error bars."""
    lines = ["# n\tbeta\tlower\tupper"]
    for rec in _records(report):
        lo = rec["beta"] - rec["beta_stderr"]
        hi = rec["beta"] + rec["beta_stderr"]
        lines.append(f"{rec['n']}\t{rec['beta']}\t{lo}\t{hi}")
    return "\n".join(lines) + "\n"


def plotdata_time(report: SweepReport | dict) -> str:
    """Mean solve time vs size with min/max whiskers."""
    lines = ["# n\tmean_ms\tmin_ms\tmax_ms"]
    for rec in _records(report):
        lines.append(f"{rec['n']}\t{rec['mean_time_ms']}\t{rec['min_time_ms']}\t{rec['max_time_ms']}")
    return "\n".join(lines) + "\n"


def config_hash(report: SweepReport | dict) -> str:
    """Stable 8-hex-digit digest of everything that configured the run."""
    obj = report.to_dict() if isinstance(report, SweepReport) else dict(report)
    config = {k: obj[k] for k in obj if k not in ("records", "environment", "qscore", "qscore_label", "stop_reason")}
    blob = json.dumps(config, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:8]


def write_report(report: SweepReport, out_dir: str | Path) -> Path:
    """Create the run directory and write all four artifacts; returns the dir."""
    stamp = time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    name = f"{stamp}-{config_hash(report)}"
    run_dir = base / name
    suffix = 1
    while run_dir.exists():
        suffix += 1
        run_dir = base / f"{name}-{suffix}"
    run_dir.mkdir()
    (run_dir / "report.json").write_text(report_to_json(report), encoding="utf-8")
    (run_dir / "report.csv").write_text(report_to_csv(report), encoding="utf-8")
    (run_dir / "beta_vs_n.tsv").write_text(plotdata_beta(report), encoding="utf-8")
    (run_dir / "time_vs_n.tsv").write_text(plotdata_time(report), encoding="utf-8")
    return run_dir
