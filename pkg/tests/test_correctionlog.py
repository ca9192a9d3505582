import json

import numpy as np
import pytest

from dexassist._testing import Paths
from dexassist.armshare import ArmCommand
from dexassist.exceptions import CorrectionLogError
from dexassist.intervene import CorrectionLog
from dexassist.intervene import FusedCommand
from dexassist.intervene import export_correction_log
from dexassist.intervene import read_correction_log
from dexassist.intervene import record_step
from dexassist.models import CorrectionLogHeader
from dexassist.models import CorrectionRecord
from dexassist.spatial import Pose

paths = Paths(__file__)

header = CorrectionLogHeader(
    method="relative", seed=3, scenario={"name": "unit"}, config={}
)


def _record(step, mode="AUTONOMOUS", dt=0.02):
    command = FusedCommand(
        arm=ArmCommand(target=Pose(position=[0.1 * step, 0.0, 0.3])),
        hand=np.array([0.01 * step, 0.2]),
        mode=mode,
        timestamp=dt * step,
    )
    policy = FusedCommand(
        arm=command.arm, hand=command.hand, mode="AUTONOMOUS", timestamp=dt * step
    )
    return CorrectionRecord(
        step=step,
        timestamp=dt * step,
        observation_id=f"obs-{step}",
        executed=command.to_record(),
        policy=policy.to_record(),
        intervention=mode != "AUTONOMOUS",
    )


@pytest.mark.parametrize("threaded", [False, True])
def test_write_read(threaded):
    filepath = paths.log(f"write_read_{threaded}")
    modes = ["AUTONOMOUS"] * 2 + ["FULL_TAKEOVER"] * 3 + ["AUTONOMOUS"]

    with CorrectionLog(filepath, header, threaded=threaded) as sink:
        for i, mode in enumerate(modes):
            record_step(sink, _record(i, mode))
    assert sink.closed
    assert sink.count == 6

    with open(filepath) as fp:
        lines = [json.loads(line) for line in fp]
    assert lines[0]["kind"] == "header"
    assert lines[0]["schema"] == "correction-log"
    assert lines[0]["version"] == 1
    assert lines[-1] == {"kind": "footer", "complete": True, "count": 6, "reason": None}

    content = read_correction_log(filepath)
    assert content.complete
    assert content.header.method == "relative"
    assert content.header.seed == 3
    assert [r.step for r in content.records] == list(range(6))
    assert [r.step for r in content.interventions()] == [2, 3, 4]
    assert content.records[4].executed.hand == [0.04, 0.2]
    assert content.records[4].observation_id == "obs-4"


def test_order():
    filepath = paths.log("order")
    sink = CorrectionLog(filepath, header, threaded=False)
    sink.append(_record(0))
    sink.append(_record(1))
    with pytest.raises(CorrectionLogError):
        sink.append(_record(1))
    with pytest.raises(CorrectionLogError):
        sink.append(_record(0))
    sink.close()
    assert sink.count == 2

    with pytest.raises(CorrectionLogError):
        sink.append(_record(2))


def test_partial():
    filepath = paths.log("partial")

    with pytest.raises(RuntimeError):
        with CorrectionLog(filepath, header) as sink:
            sink.append(_record(0))
            sink.append(_record(1))
            raise RuntimeError("solver failed")

    content = read_correction_log(filepath)
    assert not content.complete
    assert content.footer.count == 2
    assert content.footer.reason == "solver failed"
    assert len(content.records) == 2


def test_intervention_flag():
    with pytest.raises(ValueError):
        CorrectionRecord(
            step=0,
            timestamp=0.0,
            observation_id="obs-0",
            executed=_record(0, "COPILOT").executed,
            policy=_record(0).policy,
            intervention=False,
        )


def test_read_invalid():
    filepath = paths.tmp / "log_invalid.jsonl"
    good = [
        header.model_dump_json(by_alias=True),
        _record(0).model_dump_json(),
        _record(1).model_dump_json(),
    ]
    footer = '{"kind": "footer", "complete": true, "count": 2}'

    def _check(lines):
        with open(filepath, "w") as fp:
            fp.write("\n".join(lines) + "\n")
        with pytest.raises(CorrectionLogError):
            read_correction_log(filepath)

    # Missing header
    _check(good[1:] + [footer])

    # Out of order
    _check([good[0], good[2], good[1], footer])

    # Lines after footer
    _check(good + [footer, good[2]])

    # Footer count
    _check(good + ['{"kind": "footer", "complete": true, "count": 5}'])

    # Unknown kind
    _check(good + ['{"kind": "comment"}'])

    # Not json
    _check(good + ["step 2"])

    # Schema
    _check(good + ['{"kind": "record", "step": 2}'])

    # Missing file
    with pytest.raises(CorrectionLogError):
        read_correction_log(paths.tmp / "missing.jsonl")

    # Open log, no footer
    with open(filepath, "w") as fp:
        fp.write("\n".join(good) + "\n")
    content = read_correction_log(filepath)
    assert content.footer is None
    assert not content.complete


def test_export():
    filepath = paths.log("export")
    modes = ["AUTONOMOUS", "COPILOT", "COPILOT", "AUTONOMOUS", "FULL_TAKEOVER"]
    with CorrectionLog(filepath, header) as sink:
        for i, mode in enumerate(modes):
            sink.append(_record(i, mode))

    out = paths.tmp / "export" / "corrections.jsonl"
    count = export_correction_log(filepath, out, only_interventions=True)
    assert count == 3

    content = read_correction_log(out)
    assert content.complete
    assert content.footer.count == 3
    assert [r.step for r in content.records] == [1, 2, 4]
    assert content.header.method == "relative"

    assert export_correction_log(filepath, out) == 5


if __name__ == "__main__":
    test_write_read(False)
    test_write_read(True)
    test_order()
    test_partial()
    test_intervention_flag()
    test_read_invalid()
    test_export()
