import json

import numpy as np

from dexassist._testing import Paths
from dexassist._testing import hands
from dexassist.intervene import read_correction_log
from dexassist.sim import replay_correction_log
from dexassist.sim import run_rollout

paths = Paths(__file__)


def test_relative_zero_jump():
    spec = hands.scenario("open_hand_misaligned")
    result = run_rollout(spec, "relative", hands.config, seed=1)

    d = result.metrics.discontinuity
    assert d.toggle_steps == [10, 30, 50]
    assert len(d.jumps) == 3
    assert max(d.jumps) <= 1e-6
    assert [a.step for a in result.anchors] == [10, 30, 50]

    assert len(result.commands) == 60
    assert len(result.records) == 60
    assert result.policy.n_executed == 60
    assert result.metrics.misalignment == result.scenario.misalignment
    assert result.metrics.solver_not_converged >= 0

    # Engaged steps only
    engaged = [r for r in result.records if r.intervention]
    assert [r.step for r in engaged][:3] == [10, 11, 12]
    assert len(engaged) == 10 + 10 + 10
    assert len(result.metrics.tracking_error) == 30
    assert len(result.metrics.solve_runtime_ms) == 30

    # Executed commands are within limits
    model = hands.hand21
    for c in result.commands:
        assert np.all(c.hand >= model.lower_limits)
        assert np.all(c.hand <= model.upper_limits)


def test_teleop_jump():
    spec = hands.scenario("open_hand_misaligned")
    result = run_rollout(spec, "teleop", hands.config, seed=1)
    d = result.metrics.discontinuity
    assert len(d.jumps) == 3
    assert min(d.jumps) >= 1e-2


def test_autonomous_passthrough():
    spec = hands.short_scenario("open_hand_misaligned", toggles=[])
    result = run_rollout(spec, "relative", hands.config)

    assert result.anchors == []
    assert result.metrics.discontinuity.jumps == []
    for k, c in enumerate(result.commands):
        assert c.mode == "AUTONOMOUS"
        assert np.array_equal(c.hand, result.scenario.policy_hand[k])
    assert not any(r.intervention for r in result.records)


def test_log_determinism():
    spec = hands.scenario("open_hand_misaligned")
    path_a = paths.log("rollout_a")
    path_b = paths.log("rollout_b")
    run_rollout(spec, "relative", hands.config, seed=2, log_path=path_a)
    run_rollout(
        spec, "relative", hands.config, seed=2, log_path=path_b, threaded_log=True
    )

    with open(path_a, "rb") as fp:
        a = fp.read()
    with open(path_b, "rb") as fp:
        b = fp.read()
    assert a == b

    content = read_correction_log(path_a)
    assert content.complete
    assert content.header.method == "relative"
    assert content.header.seed == 2
    assert len(content.records) == 60
    assert content.records[0].observation_id == "obs-open_hand_misaligned-2-000000"
    assert [r.step for r in content.interventions()][0] == 10

    replay = replay_correction_log(path_a)
    assert replay.identical
    assert replay.n_records == 60
    assert replay.first_mismatch is None


def test_replay_mismatch():
    spec = hands.scenario("open_hand_misaligned")
    path = paths.log("rollout_tampered")
    run_rollout(spec, "deltacmd", hands.config, seed=0, log_path=path)

    with open(path) as fp:
        lines = fp.readlines()
    record = json.loads(lines[21])
    assert record["step"] == 20
    record["executed"]["hand"][0] += 0.1
    lines[21] = json.dumps(record) + "\n"
    with open(path, "w") as fp:
        fp.writelines(lines)

    replay = replay_correction_log(path)
    assert not replay.identical
    assert replay.n_mismatches == 1
    assert replay.first_mismatch == 20
    assert replay.model_dump() == {
        "n_records": 60,
        "n_mismatches": 1,
        "first_mismatch": 20,
    }


def test_pinch_safety():
    spec = hands.scenario("pinch_adversarial")
    config = hands.config
    result = run_rollout(spec, "relative", config)
    model = config.model

    d_safe = config.weights.d_safe
    for c in result.commands:
        if c.mode == "AUTONOMOUS":
            continue
        distances = [d for _, d in model.proximity_distances(c.hand)]
        assert min(distances) >= d_safe - 1e-3


def test_copilot_drift():
    spec = hands.scenario("copilot_wrist")
    result = run_rollout(spec, "relative", hands.config)
    times = result.scenario.times
    drift = np.array(result.metrics.drift)
    offset = np.array(result.metrics.target_offset)

    assert all(c.mode == "COPILOT" for c in result.commands[5:])

    # Wrist moving
    moving = (times >= 0.3) & (times <= 0.55)
    assert np.all(drift[moving] > 0.1)
    assert np.all(offset[moving] > 0.0)

    # VR dropout, then a still wrist
    still = times >= 0.86
    assert np.all(drift[still] <= 1e-9)
    assert np.all(offset[still] <= 1e-9)


if __name__ == "__main__":
    test_relative_zero_jump()
    test_teleop_jump()
    test_autonomous_passthrough()
    test_log_determinism()
    test_replay_mismatch()
    test_pinch_safety()
    test_copilot_drift()
