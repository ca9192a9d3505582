from dataclasses import dataclass

import numpy as np

from dexassist.armshare import ArmCommand
from dexassist.armshare import apply_residual
from dexassist.exceptions import DimensionMismatchError
from dexassist.models.armshareconfig import ArmShareConfig
from dexassist.models.handmodel import HandModel
from dexassist.models.records import ArmCommandRecord
from dexassist.models.records import CommandRecord
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.spatial import Twist


@dataclass(frozen=True, eq=False)
class FusedCommand:
    """
    Command executed at one control step.

    Attributes
    ----------
    arm:
        Arm command
    hand:
        Hand joint command, within limits (rad)
    mode:
        Intervention mode kind at emission
    timestamp:
        Emission time (s)
    """

    arm: ArmCommand
    hand: np.ndarray
    mode: str
    timestamp: float

    def to_record(self) -> CommandRecord:
        return CommandRecord(
            timestamp=self.timestamp,
            mode=self.mode,
            hand=self.hand.tolist(),
            arm=ArmCommandRecord(
                target_position=self.arm.target.position.tolist(),
                target_quat=self.arm.target.rotation.quat.tolist(),
                twist_linear=self.arm.twist.linear.tolist(),
                twist_angular=self.arm.twist.angular.tolist(),
                feedforward_linear=self.arm.feedforward.linear.tolist(),
                feedforward_angular=self.arm.feedforward.angular.tolist(),
            ),
        )

    @classmethod
    def from_record(cls, record: CommandRecord) -> "FusedCommand":
        arm = record.arm
        return cls(
            arm=ArmCommand(
                target=Pose(
                    position=np.array(arm.target_position),
                    rotation=Rotation.from_quat(arm.target_quat),
                ),
                twist=Twist(arm.twist_linear, arm.twist_angular),
                feedforward=Twist(arm.feedforward_linear, arm.feedforward_angular),
            ),
            hand=np.array(record.hand),
            mode=record.mode,
            timestamp=record.timestamp,
        )


def fuse_hand(
    policy_hand, human_hand, beta_h: float, model: HandModel = None
) -> np.ndarray:
    """
    Joint-space blend of policy and operator hand commands:
    `(1 - β) * policy + β * human`, then projection to the joint limits.
    `β = 1` returns the operator command and `β = 0` the policy command.

    Parameters
    ----------
    policy_hand:
        Policy hand command (rad)
    human_hand:
        Retargeted operator hand command (rad)
    beta_h:
        Operator hand authority in [0, 1]
    model:
        If set, the blend is projected to the model joint limits

    Returns
    -------
    :
        Fused hand command
    """
    policy_hand = np.asarray(policy_hand, dtype=float)
    human_hand = np.asarray(human_hand, dtype=float)
    if policy_hand.shape != human_hand.shape:
        raise DimensionMismatchError(
            name="human_hand", expected=policy_hand.shape, got=human_hand.shape
        )
    if not 0.0 <= beta_h <= 1.0:
        raise ValueError(f"Hand authority must be in [0, 1], got {beta_h}")

    q = (1.0 - beta_h) * policy_hand + beta_h * human_hand
    if model is not None:
        q = model.project_limits(q)
    return q


def fuse_arm(
    policy: ArmCommand, residual: Twist, beta_a: float, cfg: ArmShareConfig = None
) -> ArmCommand:
    """
    Compose the operator residual, scaled by the arm authority, with the
    policy target. Commanded and feedforward twists are preserved.

    Parameters
    ----------
    policy:
        Policy arm command
    residual:
        Operator residual twist
    beta_a:
        Operator arm authority in [0, 1]
    cfg:
        Arm sharing settings

    Returns
    -------
    :
        Fused arm command
    """
    if cfg is None:
        cfg = ArmShareConfig()
    if not 0.0 <= beta_a <= 1.0:
        raise ValueError(f"Arm authority must be in [0, 1], got {beta_a}")
    return apply_residual(policy, residual, beta_a, cfg)
