from typing import Annotated

import typer

from dexassist._logger import get_logger
from dexassist._settings import settings
from dexassist.cli.app import app
from dexassist.intervene.correctionlog import export_correction_log
from dexassist.sim.rollout import replay_correction_log

logger = get_logger(__name__)

log_app = typer.Typer(help="Export and replay correction logs")
app.add_typer(log_app, name="log")


def _guarded(func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except Exception as e:
        if settings.cli_raise_external_exceptions:
            raise e
        print(f"An error occurred while executing '{func.__name__}': {str(e)}")
        raise typer.Exit(code=1)


@log_app.command("export")
def export(
    filepath: Annotated[str, typer.Argument(help="Correction log filepath")],
    out: Annotated[str, typer.Option("--out", "-o", help="Output filepath")],
    only_interventions: Annotated[
        bool,
        typer.Option(
            "--only-interventions", help="Keep only intervention records"
        ),
    ] = False,
):
    """
    Export a correction log, optionally filtered to intervention records.

    Examples
    --------
    ```cmd
    dexassist log export ./out/run.jsonl --out ./out/corrections.jsonl --only-interventions
    ```
    """
    count = _guarded(
        export_correction_log, filepath, out, only_interventions=only_interventions
    )
    print(f"Exported {count} records to {out}")


@log_app.command("replay")
def replay(
    filepath: Annotated[str, typer.Argument(help="Correction log filepath")],
):
    """
    Re-run the rollout of a correction log and compare executed commands bit
    for bit. Exit code 1 if any command differs.

    Examples
    --------
    ```cmd
    dexassist log replay ./out/open_hand_misaligned_relative_0.jsonl
    ```
    """
    result = _guarded(replay_correction_log, filepath)
    print(
        f"replay | {result.n_records} records | {result.n_mismatches} mismatches | "
        f"{'IDENTICAL' if result.identical else 'DIFFERENT'}"
    )
    if not result.identical:
        raise typer.Exit(code=1)
