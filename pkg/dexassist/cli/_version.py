from dexassist._logger import get_logger
from dexassist.cli.app import app
from dexassist.version import show_version_info

logger = get_logger(__name__)


@app.command()
def version():
    """
    Return installed dexassist version and installed dependencies.

    Examples
    --------
    ```cmd
    dexassist version
    ```
    """
    print(show_version_info())
