import numpy as np
import pytest

from dexassist._testing import hands
from dexassist.armshare import ArmCommand
from dexassist.intervene import InterventionSession
from dexassist.keyvec import HumanHandSample
from dexassist.keyvec import NormalizationMap
from dexassist.models import InterventionMode
from dexassist.sim import default_grasp
from dexassist.spatial import Pose

model = hands.hand21
nmap = NormalizationMap.identity(model.n_chains)
policy_hand = default_grasp(model)
policy_arm = ArmCommand(target=Pose(position=[0.4, 0.0, 0.3]))
dt = 0.02


def _human(q, t: float) -> HumanHandSample:
    return HumanHandSample(
        timestamp=t,
        wrist_position=[0.0, 0.0, 0.0],
        wrist_quat=[0.0, 0.0, 0.0, 1.0],
        tips=model.fk_fingertips(q).tolist(),
    )


def _run(method: str, mode: InterventionMode = None, n_before: int = 3):
    """Autonomous steps, engage, then a still human for a few steps"""
    if mode is None:
        mode = InterventionMode.full_takeover()
    session = InterventionSession(
        model, nmap, method=method, q_teleop_init=model.reference_open_config()
    )
    q_open = model.reference_open_config()
    hands_out = []
    for k in range(n_before):
        result = session.step(policy_hand, policy_arm, _human(q_open, k * dt), k * dt)
        hands_out += [result.command.hand]

    k = n_before
    human = _human(q_open, k * dt)
    session.toggle_intervention(mode, session.q_exec, human, now=k * dt)
    for k in range(n_before, n_before + 3):
        result = session.step(policy_hand, policy_arm, human, k * dt)
        hands_out += [result.command.hand]
    return session, hands_out


@pytest.mark.parametrize("method", ["relative", "jacobian", "deltacmd"])
def test_zero_jump_at_engage(method):
    session, hands_out = _run(method)
    assert session.engaged
    assert np.array_equal(hands_out[3], hands_out[2])
    assert np.array_equal(hands_out[5], hands_out[2])
    assert len(session.anchors) == 1
    assert session.anchors[0].step == 3
    assert np.array_equal(session.anchors[0].anchor.q_anchor, policy_hand)


def test_teleop_jump():
    _, hands_out = _run("teleop")
    assert np.linalg.norm(hands_out[3] - hands_out[2]) > 0.1


def test_copilot_blend():
    mode = InterventionMode.copilot(beta_arm=0.5, beta_hand=0.3)
    session, hands_out = _run("teleop", mode=mode)
    human_hand = session.q_human
    assert session.mode.kind == "COPILOT"
    assert np.allclose(hands_out[-1], 0.7 * policy_hand + 0.3 * human_hand)


def test_toggle_rules():
    session = InterventionSession(model, nmap, method="relative")
    q_open = model.reference_open_config()
    session.step(policy_hand, policy_arm, _human(q_open, 0.0), 0.0)

    # Disengage while autonomous is a no-op
    session.toggle_intervention(
        InterventionMode.autonomous(), session.q_exec, _human(q_open, dt)
    )
    assert not session.engaged
    assert session.anchor is None

    session.toggle_intervention(
        InterventionMode.full_takeover(), session.q_exec, _human(q_open, dt)
    )
    anchor = session.anchor
    assert anchor is not None

    # Engage while engaged keeps the first anchor
    session.toggle_intervention(
        InterventionMode.copilot(), session.q_exec, _human(q_open, dt)
    )
    assert session.anchor is anchor
    assert session.mode.kind == "FULL_TAKEOVER"
    assert len(session.anchors) == 1

    session.toggle_intervention(
        InterventionMode.autonomous(), session.q_exec, _human(q_open, dt)
    )
    assert not session.engaged
    assert session.anchor is None


def test_autonomous_passthrough():
    session = InterventionSession(model, nmap, method="relative")
    q_open = model.reference_open_config()
    result = session.step(policy_hand, policy_arm, _human(q_open, 0.0), 0.0)
    assert np.array_equal(result.command.hand, policy_hand)
    assert result.human_hand is None
    assert result.solve_seconds is None
    assert result.command.mode == "AUTONOMOUS"
    assert np.array_equal(
        result.command.arm.target.position, policy_arm.target.position
    )
    assert session.step_index == 1

    summary = result.human_summary()
    assert len(summary.thumb_distances) == 4
    assert summary.residual_norm == 0.0


def test_unknown_method():
    with pytest.raises(ValueError):
        InterventionSession(model, nmap, method="absolute")


if __name__ == "__main__":
    for m in ["relative", "jacobian", "deltacmd"]:
        test_zero_jump_at_engage(m)
    test_teleop_jump()
    test_copilot_blend()
    test_toggle_rules()
    test_autonomous_passthrough()
    test_unknown_method()
