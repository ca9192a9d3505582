"""
Metrics serialization. JSON documents hold the full report; CSV files hold
a plot-ready long table with one row per series value.
"""

import os
from pathlib import Path
from typing import Union

import polars as pl

from dexassist._logger import get_logger
from dexassist.constants import SUPPORTED_REPORT_FORMATS
from dexassist.models.reports import DiscontinuityReport
from dexassist.models.reports import MetricsReport
from dexassist.models.reports import SweepReport

logger = get_logger(__name__)

CSV_SCHEMA = {
    "scenario": pl.String,
    "method": pl.String,
    "seed": pl.Int64,
    "series": pl.String,
    "index": pl.Int64,
    "value": pl.Float64,
}


def _check_format(fmt: str) -> None:
    if fmt not in SUPPORTED_REPORT_FORMATS:
        raise ValueError(
            f"Report format '{fmt}' is not supported. Available: "
            f"{SUPPORTED_REPORT_FORMATS}"
        )


def metrics_frame(rollouts: list[MetricsReport]) -> pl.DataFrame:
    """
    Long table of rollout series with columns `scenario`, `method`, `seed`,
    `series`, `index` and `value`.
    """
    rows = []
    for m in rollouts:
        for name, values in m.series.items():
            for i, v in enumerate(values):
                rows += [
                    {
                        "scenario": m.scenario,
                        "method": m.method,
                        "seed": m.seed,
                        "series": name,
                        "index": i,
                        "value": float(v),
                    }
                ]
    return pl.DataFrame(rows, schema=CSV_SCHEMA)


def _rollouts_from_frame(df: pl.DataFrame) -> list[MetricsReport]:
    rollouts = []
    keys = ["scenario", "method", "seed"]
    if df.height == 0:
        return rollouts
    for key, group in df.group_by(keys, maintain_order=True):
        scenario, method, seed = key
        series = {}
        for name, g in group.sort("index").group_by("series", maintain_order=True):
            series[name[0]] = g["value"].to_list()

        jumps = series.get("jump", [])
        steps = [int(s) for s in series.get("toggle_step", [])]
        misalignment = series.get("misalignment")
        rollouts += [
            MetricsReport(
                scenario=scenario,
                seed=seed,
                method=method,
                misalignment=misalignment[0] if misalignment else None,
                discontinuity=DiscontinuityReport.from_jumps(jumps, steps, method),
                tracking_error=series.get("tracking_error", []),
                drift=series.get("drift", []),
                target_offset=series.get("target_offset", []),
                solve_runtime_ms=series.get("solve_runtime_ms", []),
                solver_not_converged=int(series.get("solver_not_converged", [0])[0]),
            )
        ]
    return rollouts


def write_report(
    report: Union[MetricsReport, SweepReport],
    path: Union[str, Path],
    fmt: str = "json",
) -> Path:
    """
    Write a rollout or sweep report.

    Parameters
    ----------
    report:
        Rollout metrics or sweep report
    path:
        Output file path
    fmt:
        `json` (complete document) or `csv` (rollout series long table)

    Returns
    -------
    :
        Output path
    """
    _check_format(fmt)
    path = Path(path)
    if not path.parent.exists():
        os.makedirs(path.parent)

    logger.info(f"Writing {fmt} report to {path}")
    if fmt == "json":
        with open(path, "w") as fp:
            fp.write(report.model_dump_json(indent=2))
    else:
        rollouts = report.rollouts if isinstance(report, SweepReport) else [report]
        metrics_frame(rollouts).write_csv(path)
    return path


def read_report(
    path: Union[str, Path], fmt: str = None, sweep: bool = False
) -> Union[MetricsReport, SweepReport, list[MetricsReport]]:
    """
    Read a report written by `write_report`.

    Parameters
    ----------
    path:
        Report file path
    fmt:
        Report format. Inferred from the file extension if `None`.
    sweep:
        Read a JSON document as a sweep report

    Returns
    -------
    :
        Report for JSON documents, list of rollout metrics for CSV tables
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".")
    _check_format(fmt)

    logger.info(f"Reading {fmt} report from {path}")
    if fmt == "json":
        cls = SweepReport if sweep else MetricsReport
        with open(path, "r") as fp:
            return cls.model_validate_json_file(fp)

    df = pl.read_csv(path, schema=CSV_SCHEMA)
    return _rollouts_from_frame(df)
