from pathlib import Path
from typing import Annotated

import typer

from dexassist._logger import get_logger
from dexassist._settings import settings
from dexassist.cli._common import CLIController
from dexassist.cli._common import check_format
from dexassist.cli._common import split_methods
from dexassist.cli.app import app
from dexassist.sim.report import write_report
from dexassist.sim.rollout import run_rollout
from dexassist.sim.sweep import run_sweep

logger = get_logger(__name__)

sim_app = typer.Typer(help="Replay intervention scenarios")
app.add_typer(sim_app, name="sim")


@sim_app.command("run")
def run(
    scenario: Annotated[
        str, typer.Option("--scenario", "-s", help="Bundled scenario name or file")
    ] = "open_hand_misaligned",
    method: Annotated[
        str, typer.Option("--method", "-m", help="Hand retargeting method")
    ] = "relative",
    config: Annotated[
        str, typer.Option("--config", "-c", help="Configuration (yaml) filepath")
    ] = None,
    seed: Annotated[int, typer.Option(help="Scenario seed")] = None,
    out: Annotated[str, typer.Option(help="Output directory")] = None,
    fmt: Annotated[
        str, typer.Option("--format", "-f", help="Metrics format ['json', 'csv']")
    ] = "json",
):
    """
    Replay one scenario with one method. Writes the correction log and the
    rollout metrics to the output directory.

    Parameters
    ----------
    scenario:
        Bundled scenario name or scenario (yaml) filepath
    method:
        Hand retargeting method
    config:
        Configuration (yaml) filepath. Bundled default if not set.
    seed:
        Scenario seed. Scenario default if not set.
    out:
        Output directory. `DEXASSIST_ROOT` if not set.
    fmt:
        Metrics file format

    Examples
    --------
    ```cmd
    dexassist sim run --scenario open_hand_misaligned --method relative --out ./out
    ```
    """
    split_methods(method)
    check_format(fmt)
    controller = CLIController(
        config_filepath=config,
        scenario_name_or_path=scenario,
    )
    spec = controller.scenario
    if seed is None:
        seed = spec.seed
    dirpath = Path(out or settings.dexassist_root)
    stem = f"{spec.name}_{method}_{seed}"

    result = controller.execute(
        run_rollout,
        spec,
        method,
        controller.config,
        seed=seed,
        log_path=dirpath / f"{stem}.jsonl",
    )
    write_report(result.metrics, dirpath / f"{stem}_metrics.{fmt}", fmt=fmt)

    d = result.metrics.discontinuity
    print(
        f"{spec.name} | {method} | seed {seed} | {len(d.jumps)} interventions | "
        f"mean jump {d.mean}"
    )


@sim_app.command("sweep")
def sweep(
    scenario: Annotated[
        str, typer.Option("--scenario", "-s", help="Bundled scenario name or file")
    ] = "open_hand_misaligned",
    methods: Annotated[
        str, typer.Option("--methods", "-m", help="Comma separated methods")
    ] = "relative,jacobian,deltacmd,teleop",
    seeds: Annotated[int, typer.Option(help="Number of seeds")] = 100,
    first_seed: Annotated[int, typer.Option(help="First seed")] = 0,
    config: Annotated[
        str, typer.Option("--config", "-c", help="Configuration (yaml) filepath")
    ] = None,
    workers: Annotated[
        int, typer.Option(help="Worker processes. `DEXASSIST_SWEEP_WORKERS` if not set")
    ] = None,
    out: Annotated[str, typer.Option(help="Output directory")] = None,
    fmt: Annotated[
        str, typer.Option("--format", "-f", help="Report format ['json', 'csv']")
    ] = "json",
):
    """
    Replay one scenario over several seeds and methods and summarize the
    intervention jumps per method.

    Parameters
    ----------
    scenario:
        Bundled scenario name or scenario (yaml) filepath
    methods:
        Comma separated hand retargeting methods
    seeds:
        Number of seeds
    first_seed:
        First seed
    config:
        Configuration (yaml) filepath. Bundled default if not set.
    workers:
        Number of worker processes
    out:
        Output directory. `DEXASSIST_ROOT` if not set.
    fmt:
        Report file format

    Examples
    --------
    ```cmd
    dexassist sim sweep --methods relative,teleop --seeds 100 --workers 4
    ```
    """
    names = split_methods(methods)
    check_format(fmt)
    if seeds < 1:
        raise typer.BadParameter("At least one seed is required.")
    controller = CLIController(
        config_filepath=config,
        scenario_name_or_path=scenario,
    )
    spec = controller.scenario

    report = controller.execute(
        run_sweep,
        spec,
        names,
        list(range(first_seed, first_seed + seeds)),
        controller.config,
        workers=workers,
    )
    dirpath = Path(out or settings.dexassist_root)
    write_report(report, dirpath / f"{spec.name}_sweep.{fmt}", fmt=fmt)

    for s in report.summaries:
        print(
            f"{s.method} | {s.n_rollouts} rollouts | mean jump "
            f"{s.discontinuity.mean} [{s.discontinuity.ci_low}, "
            f"{s.discontinuity.ci_high}] | reduction vs teleop "
            f"{s.reduction_vs_teleop} | worst seed {s.worst_seed_reduction}"
        )
