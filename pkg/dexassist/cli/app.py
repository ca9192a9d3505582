import typer

from dexassist._version import VERSION

APP_NAME = "dexassist-cli"

app = typer.Typer(
    pretty_exceptions_show_locals=False,
    help=f"Dexassist {VERSION} CLI to replay intervention scenarios and run checks",
)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False, "--version", "-v", help="Show dexassist CLI version"
    ),
):
    """ """
    if version:
        print(f"Dexassist CLI version {VERSION}")
        raise typer.Exit()
