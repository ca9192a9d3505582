from typing import Annotated

import typer

from dexassist._logger import get_logger
from dexassist.cli._common import CLIController
from dexassist.cli.app import app
from dexassist.models.handmodel import HandModel
from dexassist.sim.checks import check_gradients
from dexassist.sim.checks import check_oracle
from dexassist.sim.checks import oracle_instances

logger = get_logger(__name__)

check_app = typer.Typer(help="Numerical self-checks. Exit code 1 on failure.")
app.add_typer(check_app, name="check")


@check_app.command("grads")
def grads(
    samples: Annotated[int, typer.Option(help="Number of random states")] = 100,
    seed: Annotated[int, typer.Option(help="Sampling seed")] = 0,
    tol: Annotated[float, typer.Option(help="Relative error tolerance")] = 1e-4,
    config: Annotated[
        str, typer.Option("--config", "-c", help="Configuration (yaml) filepath")
    ] = None,
):
    """
    Compare the analytic retargeting cost gradient with central finite
    differences on the configured hand model.

    Examples
    --------
    ```cmd
    dexassist check grads --samples 100
    ```
    """
    controller = CLIController(config_filepath=config)
    result = controller.execute(
        check_gradients,
        controller.config.model,
        controller.config.weights,
        samples=samples,
        seed=seed,
        tol=tol,
    )
    print(
        f"grads | {result.n_samples} states | worst relative error "
        f"{result.worst_error:.3e} | {'PASS' if result.passed else 'FAIL'}"
    )
    if not result.passed:
        raise typer.Exit(code=1)


@check_app.command("oracle")
def oracle(
    instances: Annotated[int, typer.Option(help="Number of fixture instances")] = 20,
    seed: Annotated[int, typer.Option(help="Fixture seed")] = 0,
    resolution: Annotated[float, typer.Option(help="Grid resolution (rad)")] = 1e-3,
    tol: Annotated[float, typer.Option(help="Cost tolerance")] = 1e-5,
    config: Annotated[
        str, typer.Option("--config", "-c", help="Configuration (yaml) filepath")
    ] = None,
):
    """
    Compare retargeting solves on the two joint finger with brute-force grid
    minima.

    Examples
    --------
    ```cmd
    dexassist check oracle --instances 20
    ```
    """
    controller = CLIController(config_filepath=config)
    model = HandModel.load("finger2")
    result = controller.execute(
        check_oracle,
        oracle_instances(model, n=instances, seed=seed),
        model,
        controller.config.weights,
        controller.config.solver,
        resolution=resolution,
        tol=tol,
    )
    print(
        f"oracle | {result.n_instances} instances | worst gap "
        f"{result.worst_gap:.3e} | {'PASS' if result.passed else 'FAIL'}"
    )
    if not result.passed:
        raise typer.Exit(code=1)
