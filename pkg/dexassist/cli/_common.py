from typing import Callable
from typing import Union

import typer
from pydantic import BaseModel

from dexassist._logger import get_logger
from dexassist._settings import settings
from dexassist.constants import SUPPORTED_METHODS
from dexassist.constants import SUPPORTED_REPORT_FORMATS
from dexassist.models.scenariospec import ScenarioSpec
from dexassist.models.simconfig import SimConfig

logger = get_logger(__name__)


def split_methods(methods: str) -> list[str]:
    """Parse a comma separated list of retargeting methods"""
    names = [m.strip() for m in methods.split(",") if m.strip()]
    for m in names:
        if m not in SUPPORTED_METHODS:
            raise typer.BadParameter(
                f"Method '{m}' is not supported. Available: {SUPPORTED_METHODS}"
            )
    if not names:
        raise typer.BadParameter("At least one method is required.")
    return names


def check_format(fmt: str) -> str:
    if fmt not in SUPPORTED_REPORT_FORMATS:
        raise typer.BadParameter(
            f"Format '{fmt}' is not supported. Available: {SUPPORTED_REPORT_FORMATS}"
        )
    return fmt


class CLIController(BaseModel):
    config_filepath: Union[str, None] = None
    scenario_name_or_path: Union[str, None] = None
    config: Union[SimConfig, None] = None
    scenario: Union[ScenarioSpec, None] = None

    def model_post_init(self, __context):
        super().model_post_init(__context)

        # Read configuration, bundled default if not provided
        self.config = SimConfig.load(self.config_filepath)

        # Read scenario
        if self.scenario_name_or_path is not None:
            self.scenario = ScenarioSpec.load(self.scenario_name_or_path)

    def execute(self, func: Callable, *args, **kwargs):
        """
        Call `func`, printing failures and exiting with code 1 unless
        `settings.cli_raise_external_exceptions` is set.
        """
        try:
            return func(*args, **kwargs)
        except Exception as e:
            if settings.cli_raise_external_exceptions:
                raise e
            print(f"An error occurred while executing '{func.__name__}': {str(e)}")
            raise typer.Exit(code=1)
