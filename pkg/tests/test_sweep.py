import pytest

from dexassist._testing import hands
from dexassist.models import DiscontinuityReport
from dexassist.models import MetricsReport
from dexassist.sim import run_sweep
from dexassist.sim import summarize_method


def _metrics(method, jumps, seed=0):
    return MetricsReport(
        scenario="unit",
        seed=seed,
        method=method,
        discontinuity=DiscontinuityReport.from_jumps(jumps, [10] * len(jumps)),
        tracking_error=[0.002],
        solve_runtime_ms=[1.0, 3.0, 2.0],
    )


def test_summarize_method():
    rollouts = [_metrics("jacobian", [0.1, 0.2], 0), _metrics("jacobian", [0.3], 1)]
    summary = summarize_method("jacobian", rollouts, teleop_mean=0.4)

    assert summary.n_rollouts == 2
    assert summary.discontinuity.jumps == [0.1, 0.2, 0.3]
    assert summary.discontinuity.mean == pytest.approx(0.2)
    assert summary.reduction_vs_teleop == pytest.approx(0.5)
    assert summary.mean_tracking_error == pytest.approx(0.002)
    assert summary.median_solve_ms == 2.0

    summary = summarize_method("jacobian", rollouts)
    assert summary.reduction_vs_teleop is None


def test_summarize_seed_reductions():
    rollouts = [
        _metrics("relative", [0.0, 0.0], 0),
        _metrics("relative", [0.02], 1),
        _metrics("relative", [0.0], 2),
    ]
    seed_means = {0: 0.1, 1: 0.04, 2: 0.05}
    summary = summarize_method(
        "relative", rollouts, teleop_mean=0.06, teleop_seed_means=seed_means
    )

    # The pooled reduction hides the regressing seed
    assert summary.reduction_vs_teleop == pytest.approx(1.0 - 0.005 / 0.06)
    assert summary.seed_reductions == pytest.approx({0: 1.0, 1: 0.5, 2: 1.0})
    assert summary.worst_seed_reduction == pytest.approx(0.5)
    assert summary.fraction_seeds_reduced == pytest.approx(2.0 / 3.0)

    summary = summarize_method("relative", rollouts, teleop_mean=0.06)
    assert summary.seed_reductions == {}
    assert summary.worst_seed_reduction is None
    assert summary.fraction_seeds_reduced is None


def test_sweep():
    spec = hands.scenario("open_hand_misaligned")
    report = run_sweep(spec, ["relative", "teleop"], [0, 1], hands.config, workers=1)

    assert report.scenario == "open_hand_misaligned"
    assert report.seeds == [0, 1]
    assert len(report.rollouts) == 4
    assert [(r.method, r.seed) for r in report.rollouts] == [
        ("relative", 0),
        ("relative", 1),
        ("teleop", 0),
        ("teleop", 1),
    ]

    relative = report.summary("relative")
    teleop = report.summary("teleop")
    assert relative.n_rollouts == 2
    assert len(relative.discontinuity.jumps) == 6
    assert relative.discontinuity.mean <= 1e-6
    assert teleop.discontinuity.mean >= 1e-2
    assert relative.reduction_vs_teleop >= 0.99
    assert teleop.reduction_vs_teleop == 0.0
    assert relative.seed_reductions.keys() == {0, 1}
    assert relative.worst_seed_reduction >= 0.99
    assert relative.fraction_seeds_reduced == 1.0
    assert teleop.worst_seed_reduction == 0.0


@pytest.mark.slow
def test_sweep_full():
    spec = hands.scenario("open_hand_misaligned")
    seeds = list(range(100))
    report = run_sweep(spec, ["relative", "teleop"], seeds, hands.config, workers=2)

    misalignments = {r.seed: r.misalignment for r in report.rollouts}
    assert all(0.2 <= m <= 0.8 for m in misalignments.values())

    relative = report.summary("relative")
    teleop = report.summary("teleop")
    assert relative.n_rollouts == 100
    assert relative.discontinuity.mean <= 1e-6
    assert teleop.discontinuity.mean >= 1e-2
    assert len(relative.seed_reductions) == 100
    assert relative.worst_seed_reduction >= 0.99
    assert relative.fraction_seeds_reduced == 1.0


def test_sweep_invalid_method():
    spec = hands.scenario("open_hand_misaligned")
    with pytest.raises(ValueError):
        run_sweep(spec, ["relative", "retarget"], [0], hands.config, workers=1)


if __name__ == "__main__":
    test_summarize_method()
    test_summarize_seed_reductions()
    test_sweep()
    test_sweep_full()
    test_sweep_invalid_method()
