"""
Scripted policy streams. The mock policy predicts an action chunk of length
`H` at every control step and only the first action is executed.
"""

import numpy as np

from dexassist._logger import get_logger
from dexassist.armshare import ArmCommand
from dexassist.models.handmodel import HandModel
from dexassist.models.scenariospec import PolicyStreamSpec
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.spatial import Twist
from dexassist.spatial import so3_exp

logger = get_logger(__name__)


def default_grasp(model: HandModel) -> np.ndarray:
    """
    Power grasp used when a scenario does not set one: thumb flexion joints
    at 0.2 rad, other flexion joints at 0.4 rad, every other joint at 0,
    projected to the joint limits.

    Examples
    --------
    ```py
    from dexassist.models import HandModel
    from dexassist.sim import default_grasp

    model = HandModel.load("finger2")
    print(default_grasp(model))
    # > [0.2 0.2]
    ```
    """
    q = np.zeros(model.dof)
    kinds = model.joint_kinds
    for c, sl in enumerate(model.chain_slices):
        value = 0.2 if c == 0 else 0.4
        for i in range(sl.start, sl.stop):
            if kinds[i] == "flexion":
                q[i] = value
    return model.project_limits(q)


def flexion_mask(model: HandModel, chain: int = None) -> np.ndarray:
    """Boolean mask of the flexion joints, optionally of one chain"""
    mask = np.array([k == "flexion" for k in model.joint_kinds])
    if chain is not None:
        keep = np.zeros(model.dof, dtype=bool)
        keep[model.chain_slices[chain]] = True
        mask &= keep
    return mask


def policy_grasp(spec: PolicyStreamSpec, model: HandModel) -> np.ndarray:
    if spec.grasp is None:
        return default_grasp(model)
    return model.project_limits(model.check_config(spec.grasp))


def policy_hand_trajectory(
    spec: PolicyStreamSpec, model: HandModel, times: np.ndarray
) -> np.ndarray:
    """
    Policy hand commands at `times`: the grasp with a flexion oscillation.

    Returns
    -------
    :
        Array of shape (len(times), dof) (rad)
    """
    grasp = policy_grasp(spec, model)
    wave = spec.hand_amplitude * np.sin(2.0 * np.pi * spec.hand_frequency * times)
    q = grasp[None, :] + wave[:, None] * flexion_mask(model)[None, :]
    return np.clip(q, model.lower_limits, model.upper_limits)


def policy_arm_trajectory(
    spec: PolicyStreamSpec, times: np.ndarray
) -> list[ArmCommand]:
    """
    Policy arm commands at `times`: constant velocity target with matching
    commanded and feedforward twists.
    """
    v = np.array(spec.arm_linear_velocity, dtype=float)
    w = np.array(spec.arm_angular_velocity, dtype=float)
    p0 = np.array(spec.arm_position, dtype=float)
    r0 = Rotation.from_rotvec(spec.arm_rotvec)
    twist = Twist(linear=v, angular=w)

    commands = []
    for t in times:
        target = Pose(position=p0 + v * t, rotation=so3_exp(w * t) @ r0)
        commands += [ArmCommand(target=target, twist=twist, feedforward=twist)]
    return commands


class MockPolicyStream:
    """
    Receding-horizon mock policy over precomputed trajectories. Counters
    track predicted chunks and executed or discarded actions.

    Parameters
    ----------
    hand:
        Hand commands, one row per control step, possibly extending past the
        last step
    arm:
        Arm commands aligned with `hand`
    horizon:
        Chunk length `H`

    Examples
    --------
    ```py
    import numpy as np

    from dexassist.armshare import ArmCommand
    from dexassist.sim import MockPolicyStream
    from dexassist.spatial import Pose

    hand = np.zeros((10, 2))
    arm = [ArmCommand(target=Pose.identity())] * 10
    policy = MockPolicyStream(hand, arm, horizon=4)
    policy.next_action(0)
    print(policy.n_chunks, policy.n_executed, policy.n_discarded)
    # > 1 1 3
    ```
    """

    def __init__(self, hand: np.ndarray, arm: list[ArmCommand], horizon: int = 8):
        if len(hand) != len(arm):
            raise ValueError(
                f"Hand and arm streams differ in length ({len(hand)} != {len(arm)})"
            )
        if horizon < 1:
            raise ValueError(f"Horizon must be at least 1, got {horizon}")
        self.hand = np.asarray(hand, dtype=float)
        self.arm = list(arm)
        self.horizon = horizon
        self.n_chunks = 0
        self.n_executed = 0
        self.n_discarded = 0

    def __len__(self) -> int:
        return len(self.arm)

    def predict(self, step: int) -> list[tuple[np.ndarray, ArmCommand]]:
        """
        Action chunk starting at `step`, truncated at the end of the stream.
        """
        if not 0 <= step < len(self):
            raise IndexError(f"Step {step} is outside the policy stream")
        stop = min(step + self.horizon, len(self))
        self.n_chunks += 1
        return [(self.hand[i].copy(), self.arm[i]) for i in range(step, stop)]

    def next_action(self, step: int) -> tuple[np.ndarray, ArmCommand]:
        """Predict a chunk and execute its first action"""
        chunk = self.predict(step)
        self.n_executed += 1
        self.n_discarded += len(chunk) - 1
        return chunk[0]

    def max_hand_delta(self) -> float:
        """Largest per-step joint change (inf-norm) of the hand stream"""
        if len(self.hand) < 2:
            return 0.0
        return float(np.abs(np.diff(self.hand, axis=0)).max())
