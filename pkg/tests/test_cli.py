import json

from typer.testing import CliRunner

from dexassist import settings
from dexassist._testing import Paths
from dexassist.cli import app
from dexassist.intervene import read_correction_log
from dexassist.sim import read_report

runner = CliRunner()
settings.cli_raise_external_exceptions = True
paths = Paths(__file__)


def _outdir():
    return paths.unique_dir("cli")


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert "Dexassist CLI version" in result.stdout

    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "dexassist" in result.stdout


def test_sim_run():
    out = _outdir()
    result = runner.invoke(
        app,
        [
            "sim",
            "run",
            "--scenario",
            "open_hand_misaligned",
            "--method",
            "relative",
            "--seed",
            "3",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    assert "open_hand_misaligned | relative | seed 3 | 3 interventions" in result.stdout

    log = read_correction_log(out / "open_hand_misaligned_relative_3.jsonl")
    assert log.complete
    assert log.header.seed == 3

    metrics = read_report(out / "open_hand_misaligned_relative_3_metrics.json")
    assert metrics.method == "relative"
    assert max(metrics.discontinuity.jumps) <= 1e-6

    # Log replay
    filepath = str(out / "open_hand_misaligned_relative_3.jsonl")
    result = runner.invoke(app, ["log", "replay", filepath])
    assert result.exit_code == 0
    assert "replay | 60 records | 0 mismatches | IDENTICAL" in result.stdout

    # Log export
    exported = out / "corrections.jsonl"
    result = runner.invoke(
        app, ["log", "export", filepath, "--out", str(exported), "--only-interventions"]
    )
    assert result.exit_code == 0
    assert f"Exported 30 records to {exported}" in result.stdout
    assert all(r.intervention for r in read_correction_log(exported).records)


def test_sim_run_csv():
    out = _outdir()
    result = runner.invoke(
        app,
        ["sim", "run", "-s", "pinch_adversarial", "-m", "deltacmd", "--out", str(out)],
    )
    assert result.exit_code == 0
    result = runner.invoke(
        app,
        [
            "sim",
            "run",
            "-s",
            "pinch_adversarial",
            "-m",
            "teleop",
            "--out",
            str(out),
            "-f",
            "csv",
        ],
    )
    assert result.exit_code == 0
    rollouts = read_report(out / "pinch_adversarial_teleop_0_metrics.csv")
    assert rollouts[0].method == "teleop"
    assert (out / "pinch_adversarial_deltacmd_0_metrics.json").exists()


def test_sim_sweep():
    out = _outdir()
    result = runner.invoke(
        app,
        [
            "sim",
            "sweep",
            "--methods",
            "relative,teleop",
            "--seeds",
            "2",
            "--workers",
            "1",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    assert "relative | 2 rollouts" in result.stdout
    assert "teleop | 2 rollouts" in result.stdout

    with open(out / "open_hand_misaligned_sweep.json") as fp:
        data = json.load(fp)
    assert data["seeds"] == [0, 1]
    assert [s["method"] for s in data["summaries"]] == ["relative", "teleop"]
    assert data["summaries"][0]["reduction_vs_teleop"] >= 0.99
    assert data["summaries"][0]["worst_seed_reduction"] >= 0.99
    assert data["summaries"][0]["fraction_seeds_reduced"] == 1.0


def test_bad_parameters():
    result = runner.invoke(app, ["sim", "run", "--method", "retarget"])
    assert result.exit_code != 0

    result = runner.invoke(app, ["sim", "sweep", "--format", "parquet"])
    assert result.exit_code != 0

    result = runner.invoke(app, ["sim", "sweep", "--seeds", "0"])
    assert result.exit_code != 0


def test_check():
    result = runner.invoke(app, ["check", "grads", "--samples", "5"])
    assert result.exit_code == 0
    assert "grads | 5 states" in result.stdout
    assert "PASS" in result.stdout

    result = runner.invoke(
        app, ["check", "oracle", "--instances", "2", "--resolution", "0.002"]
    )
    assert result.exit_code == 0
    assert "oracle | 2 instances" in result.stdout
    assert "PASS" in result.stdout


if __name__ == "__main__":
    test_version()
    test_sim_run()
    test_sim_run_csv()
    test_sim_sweep()
    test_bad_parameters()
    test_check()
