from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    model_config = ConfigDict(populate_by_name=True)

    # CLI
    cli_raise_external_exceptions: bool = Field(
        False, alias="DEXASSIST_CLI_RAISE_EXTERNAL_EXCEPTIONS"
    )

    # Paths
    dexassist_root: str = Field("./", alias="DEXASSIST_ROOT")

    # Harness
    sweep_workers: int = Field(1, alias="DEXASSIST_SWEEP_WORKERS")
    log_writer_thread: bool = Field(False, alias="DEXASSIST_LOG_WRITER_THREAD")

    # Logging
    log_level: str = Field("INFO", alias="DEXASSIST_LOG_LEVEL")

    @field_validator("log_level")
    @classmethod
    def upper_log_level(cls, value: str) -> str:
        return value.upper()

    @field_validator("sweep_workers")
    @classmethod
    def positive_workers(cls, value: int) -> int:
        if value < 1:
            raise ValueError("`DEXASSIST_SWEEP_WORKERS` must be at least 1.")
        return value


settings = Settings()
