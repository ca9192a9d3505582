"""
On-policy correction log: a JSON lines file holding a versioned header, one
record per control step (autonomous steps included) and a footer.
"""

import json
import os
import queue
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator
from typing import Union

from pydantic import ValidationError

from dexassist._logger import get_logger
from dexassist._settings import settings
from dexassist.exceptions import CorrectionLogError
from dexassist.models.records import CorrectionLogFooter
from dexassist.models.records import CorrectionLogHeader
from dexassist.models.records import CorrectionRecord

logger = get_logger(__name__)

_STOP = object()


class CorrectionLog:
    """
    Append-only correction log sink. Records must arrive in step and
    timestamp order.

    Writes are either synchronous or delivered in order by a background
    writer thread; in the latter case a storage failure is raised on the
    next `append` or on `close`.

    Parameters
    ----------
    path:
        Output file path
    header:
        Log header
    threaded:
        Offload writes to a writer thread. Defaults to
        `settings.log_writer_thread`.

    Examples
    --------
    ```py
    from dexassist.intervene import CorrectionLog
    from dexassist.models import CorrectionLogHeader

    header = CorrectionLogHeader(method="relative", seed=0, scenario={}, config={})
    with CorrectionLog("./log.jsonl", header) as sink:
        pass
    print(sink.count)
    # > 0
    ```
    """

    def __init__(
        self,
        path: Union[str, Path],
        header: CorrectionLogHeader,
        threaded: bool = None,
    ):
        if threaded is None:
            threaded = settings.log_writer_thread
        self.path = Path(path)
        self.header = header
        self.count = 0
        self.closed = False
        self._last_step = None
        self._last_timestamp = None
        self._error: Exception = None
        self._queue = None
        self._thread = None

        dirpath = self.path.parent
        if not dirpath.exists():
            os.makedirs(dirpath)

        logger.debug(f"Opening correction log {self.path}")
        try:
            self._fp = open(self.path, "w")
        except OSError as e:
            raise CorrectionLogError(f"Could not open log ({e})", self.path) from e

        if threaded:
            self._queue = queue.Queue()
            self._thread = threading.Thread(target=self._drain, daemon=True)
            self._thread.start()

        self._write(header.model_dump_json(by_alias=True))

    # ----------------------------------------------------------------------- #
    # Context                                                                 #
    # ----------------------------------------------------------------------- #

    def __enter__(self) -> "CorrectionLog":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self.closed:
            return
        if exc is None:
            self.close()
        else:
            self.close(complete=False, reason=str(exc))

    # ----------------------------------------------------------------------- #
    # Writing                                                                 #
    # ----------------------------------------------------------------------- #

    def _write_line(self, line: str) -> None:
        self._fp.write(line + "\n")

    def _drain(self) -> None:
        while True:
            line = self._queue.get()
            if line is _STOP:
                return
            if self._error is not None:
                continue
            try:
                self._write_line(line)
            except Exception as e:
                self._error = e

    def _raise_pending(self) -> None:
        if self._error is not None:
            error, self._error = self._error, None
            raise CorrectionLogError(f"Write failed ({error})", self.path) from error

    def _write(self, line: str) -> None:
        if self._queue is not None:
            self._raise_pending()
            self._queue.put(line)
            return
        try:
            self._write_line(line)
        except Exception as e:
            raise CorrectionLogError(f"Write failed ({e})", self.path) from e

    def append(self, record: CorrectionRecord) -> None:
        if self.closed:
            raise CorrectionLogError("Log is closed", self.path)
        if self._last_step is not None and (
            record.step <= self._last_step or record.timestamp < self._last_timestamp
        ):
            raise CorrectionLogError(
                f"Record step {record.step} at t={record.timestamp} does not follow "
                f"step {self._last_step} at t={self._last_timestamp}",
                self.path,
            )
        self._write(record.model_dump_json())
        self._last_step = record.step
        self._last_timestamp = record.timestamp
        self.count += 1

    def close(self, complete: bool = True, reason: str = None) -> None:
        """
        Write the footer and close the file.

        Parameters
        ----------
        complete:
            `False` flags a partial log
        reason:
            Abort reason of a partial log
        """
        if self.closed:
            return
        footer = CorrectionLogFooter(complete=complete, count=self.count, reason=reason)
        try:
            self._write(footer.model_dump_json())
        finally:
            self.closed = True
            if self._thread is not None:
                self._queue.put(_STOP)
                self._thread.join()
            self._fp.close()
        self._raise_pending()
        if complete:
            logger.debug(f"Closed correction log {self.path} ({self.count} records)")
        else:
            logger.warning(
                f"Closed partial correction log {self.path} ({self.count} records): "
                f"{reason}"
            )


def record_step(sink: CorrectionLog, record: CorrectionRecord) -> None:
    """
    Append one control step record to a correction log.

    Parameters
    ----------
    sink:
        Open correction log
    record:
        Record of the step
    """
    sink.append(record)


# --------------------------------------------------------------------------- #
# Reading                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class CorrectionLogContent:
    """
    Parsed correction log.

    Attributes
    ----------
    header:
        Log header
    records:
        Step records in order
    footer:
        Log footer, `None` if the writer never closed the log
    """

    header: CorrectionLogHeader
    records: list[CorrectionRecord]
    footer: CorrectionLogFooter = None

    @property
    def complete(self) -> bool:
        return self.footer is not None and self.footer.complete

    def interventions(self) -> Iterator[CorrectionRecord]:
        """Records of the intervention segments"""
        return (r for r in self.records if r.intervention)


def read_correction_log(path: Union[str, Path]) -> CorrectionLogContent:
    """
    Read and validate a correction log.

    Parameters
    ----------
    path:
        Log file path

    Returns
    -------
    :
        Parsed log

    Raises
    ------
    CorrectionLogError
        If the file is missing a header, has lines after the footer, has
        records out of order or does not match the schema.
    """
    logger.info(f"Reading correction log from {path}")

    header = None
    footer = None
    records = []
    try:
        with open(path, "r") as fp:
            lines = [line for line in fp if line.strip()]
    except OSError as e:
        raise CorrectionLogError(f"Could not read log ({e})", path) from e

    for i, line in enumerate(lines):
        try:
            d = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorrectionLogError(f"Line {i} is not valid JSON", path) from e
        kind = d.get("kind")
        try:
            if i == 0:
                if kind != "header":
                    raise CorrectionLogError("First line must be the header", path)
                header = CorrectionLogHeader.model_validate(d)
            elif footer is not None:
                raise CorrectionLogError(f"Line {i} follows the footer", path)
            elif kind == "footer":
                footer = CorrectionLogFooter.model_validate(d)
            elif kind == "record":
                r = CorrectionRecord.model_validate(d)
                if records and (
                    r.step <= records[-1].step or r.timestamp < records[-1].timestamp
                ):
                    raise CorrectionLogError(f"Record {r.step} is out of order", path)
                records += [r]
            else:
                raise CorrectionLogError(f"Line {i} has unknown kind '{kind}'", path)
        except ValidationError as e:
            raise CorrectionLogError(f"Line {i} does not match schema ({e})", path) from e

    if header is None:
        raise CorrectionLogError("Log is empty", path)
    if footer is not None and footer.count != len(records):
        raise CorrectionLogError(
            f"Footer count {footer.count} does not match {len(records)} records", path
        )

    return CorrectionLogContent(header=header, records=records, footer=footer)


def export_correction_log(
    path: Union[str, Path],
    out: Union[str, Path],
    only_interventions: bool = False,
) -> int:
    """
    Export a correction log, optionally keeping only the intervention
    records. Header and footer are carried over with the footer count
    updated.

    Parameters
    ----------
    path:
        Source log path
    out:
        Output log path
    only_interventions:
        Keep only records flagged as interventions

    Returns
    -------
    :
        Number of exported records
    """
    content = read_correction_log(path)
    records = content.records
    if only_interventions:
        records = list(content.interventions())

    footer = content.footer or CorrectionLogFooter(
        complete=False, count=0, reason="missing footer"
    )
    footer = footer.model_copy(update={"count": len(records)})

    logger.info(f"Writing {len(records)} records to {out}")
    out = Path(out)
    if not out.parent.exists():
        os.makedirs(out.parent)
    with open(out, "w") as fp:
        fp.write(content.header.model_dump_json(by_alias=True) + "\n")
        for r in records:
            fp.write(r.model_dump_json() + "\n")
        fp.write(footer.model_dump_json() + "\n")

    return len(records)
