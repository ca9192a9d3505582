import json

import pytest

from dexassist._testing import Paths
from dexassist.models import DiscontinuityReport
from dexassist.models import MethodSummary
from dexassist.models import MetricsReport
from dexassist.models import SweepReport
from dexassist.models import mean_confidence_interval
from dexassist.sim import metrics_frame
from dexassist.sim import read_report
from dexassist.sim import write_report

paths = Paths(__file__)


def _metrics(method="relative", seed=0, jump=0.0):
    return MetricsReport(
        scenario="unit",
        seed=seed,
        method=method,
        misalignment=0.4,
        discontinuity=DiscontinuityReport.from_jumps(
            [jump, 2 * jump], [10, 30], method=method
        ),
        tracking_error=[0.001, 0.002, 0.003],
        drift=[0.0, 0.5, 0.25],
        target_offset=[0.0, 0.01, 0.0],
        solve_runtime_ms=[1.5, 2.5],
        solver_not_converged=1,
    )


metrics = _metrics()


def test_mean_confidence_interval():
    assert mean_confidence_interval([]) == (None, None, None)
    assert mean_confidence_interval([2.0]) == (2.0, 2.0, 2.0)

    # Student-t below 30 samples
    mean, low, high = mean_confidence_interval([1.0, 2.0, 3.0])
    assert mean == 2.0
    assert high - mean == pytest.approx(4.302653 * 1.0 / 3**0.5, rel=1e-5)
    assert mean - low == pytest.approx(high - mean)

    # Normal above
    values = [0.0, 1.0] * 20
    mean, low, high = mean_confidence_interval(values)
    sem = 0.5063696835 / 40**0.5
    assert high - mean == pytest.approx(1.959964 * sem, rel=1e-5)


def test_series():
    series = metrics.series
    assert series["jump"] == [0.0, 0.0]
    assert series["toggle_step"] == [10.0, 30.0]
    assert series["misalignment"] == [0.4]
    assert series["solver_not_converged"] == [1.0]

    df = metrics_frame([metrics])
    assert df.columns == ["scenario", "method", "seed", "series", "index", "value"]
    assert df.height == sum(len(v) for v in series.values())


def test_json():
    filepath = write_report(metrics, paths.tmp / "report" / "metrics.json")
    assert filepath.exists()

    with open(filepath) as fp:
        data = json.load(fp)
    assert data["schema_version"] == 1
    assert data["discontinuity"]["jumps"] == [0.0, 0.0]

    report = read_report(filepath)
    assert report.method == "relative"
    assert report.drift == metrics.drift
    assert report.discontinuity.toggle_steps == [10, 30]


def test_csv():
    rollouts = [_metrics("relative", 0), _metrics("teleop", 0, jump=0.3)]
    sweep = SweepReport(
        scenario="unit",
        seeds=[0],
        summaries=[
            MethodSummary(
                method=r.method, n_rollouts=1, discontinuity=r.discontinuity
            )
            for r in rollouts
        ],
        rollouts=rollouts,
    )
    filepath = write_report(sweep, paths.tmp / "report" / "sweep.csv", fmt="csv")

    restored = read_report(filepath)
    assert [r.method for r in restored] == ["relative", "teleop"]
    teleop = restored[1]
    assert teleop.seed == 0
    assert teleop.misalignment == 0.4
    assert teleop.discontinuity.jumps == pytest.approx([0.3, 0.6])
    assert teleop.discontinuity.toggle_steps == [10, 30]
    assert teleop.drift == [0.0, 0.5, 0.25]
    assert teleop.solver_not_converged == 1


def test_sweep_json():
    sweep = SweepReport(
        scenario="unit",
        seeds=[0, 1],
        summaries=[
            MethodSummary(
                method="relative",
                n_rollouts=2,
                discontinuity=metrics.discontinuity,
                reduction_vs_teleop=1.0,
            )
        ],
        rollouts=[metrics, _metrics(seed=1)],
    )
    filepath = write_report(sweep, paths.tmp / "report" / "sweep.json")
    restored = read_report(filepath, sweep=True)
    assert restored.seeds == [0, 1]
    assert restored.summary("relative").reduction_vs_teleop == 1.0
    assert len(restored.rollouts) == 2

    with pytest.raises(KeyError):
        restored.summary("teleop")


def test_format():
    with pytest.raises(ValueError):
        write_report(metrics, paths.tmp / "report" / "metrics.parquet", fmt="parquet")
    with pytest.raises(ValueError):
        read_report(paths.tmp / "report" / "metrics.txt")


if __name__ == "__main__":
    test_mean_confidence_interval()
    test_series()
    test_json()
    test_csv()
    test_sweep_json()
    test_format()
