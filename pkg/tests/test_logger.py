import logging

from dexassist._logger import DexassistFormatter
from dexassist._logger import get_logger


def test_get_logger():
    # Get logger
    logger = get_logger(__name__)

    # Log info
    logger.info("This is an info log")

    # Handler attached once
    logger = get_logger(__name__)
    assert len(logger.handlers) == 1
    assert get_logger(__name__, stream=False).handlers == []


def test_formatter():
    formatter = DexassistFormatter()
    record = logging.LogRecord(
        "dexassist.sim", logging.WARNING, __file__, 1, "stale", None, None
    )
    record.created = 0.0
    assert formatter.format(record) == (
        "1970-01-01 00:00:00 [dexassist.sim] WARNING | stale"
    )

    record = logging.LogRecord(
        "dexassist.sim", logging.INFO, __file__, 1, "running", None, None
    )
    record.created = 0.0
    assert formatter.format(record) == "1970-01-01 00:00:00 [dexassist] running"


if __name__ == "__main__":
    test_get_logger()
    test_formatter()
