import os

import pytest

from dexassist import Settings


def test_settings():
    settings0 = Settings()
    settings1 = Settings(sweep_workers=4)
    os.environ["DEXASSIST_SWEEP_WORKERS"] = "2"
    os.environ["DEXASSIST_LOG_LEVEL"] = "debug"
    settings2 = Settings()
    del os.environ["DEXASSIST_SWEEP_WORKERS"]
    del os.environ["DEXASSIST_LOG_LEVEL"]

    assert settings0.sweep_workers == 1
    assert settings0.dexassist_root == "./"
    assert not settings0.cli_raise_external_exceptions
    assert settings1.sweep_workers == 4
    assert settings2.sweep_workers == 2
    assert settings2.log_level == "DEBUG"

    with pytest.raises(ValueError):
        Settings(sweep_workers=0)


if __name__ == "__main__":
    test_settings()
