"""
Velocity-based shared arm control. The operator's wrist motion is turned
into a residual twist (finite difference over a short VR window, EMA
smoothed, expressed in the robot base frame) and composed with the policy
arm target. When the operator holds still the residual decays to zero.
"""

from collections import deque
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from dexassist._logger import get_logger
from dexassist.models.armshareconfig import ArmShareConfig
from dexassist.spatial import EmaFilter
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.spatial import Twist
from dexassist.spatial import so3_exp
from dexassist.spatial import so3_log

logger = get_logger(__name__)


# --------------------------------------------------------------------------- #
# Types                                                                       #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class ArmCommand:
    """
    Arm command sent to the task-space tracker.

    Attributes
    ----------
    target:
        Target pose in the robot base frame
    twist:
        Commanded spatial velocity
    feedforward:
        Feedforward spatial velocity from the policy
    """

    target: Pose
    twist: Twist = field(default_factory=Twist.zero)
    feedforward: Twist = field(default_factory=Twist.zero)


class VrPoseWindow:
    """
    Ring buffer of timestamped VR wrist poses in the device frame. Single
    producer, single consumer: the control step only reads complete samples.

    Parameters
    ----------
    maxlen:
        Buffer length, at least `k + 1`
    frame:
        Frame tag of the stored poses
    """

    def __init__(self, maxlen: int = 3, frame: str = "device"):
        if maxlen < 2:
            raise ValueError(f"VR window length must be at least 2, got {maxlen}")
        self.frame = frame
        self._samples = deque(maxlen=maxlen)

    def __len__(self) -> int:
        return len(self._samples)

    @property
    def maxlen(self) -> int:
        return self._samples.maxlen

    def push(self, timestamp: float, pose: Pose) -> None:
        if self._samples and timestamp < self._samples[-1][0]:
            raise ValueError(
                f"VR timestamps must be monotone ({timestamp} after "
                f"{self._samples[-1][0]})"
            )
        self._samples.append((float(timestamp), pose))

    def newest(self) -> tuple[float, Pose]:
        return self._samples[-1]

    def back(self, k: int) -> tuple[float, Pose]:
        """Sample `k` ticks before the newest one"""
        return self._samples[-1 - k]

    def clear(self) -> None:
        self._samples.clear()


# --------------------------------------------------------------------------- #
# Operations                                                                  #
# --------------------------------------------------------------------------- #


def estimate_residual_twist(
    window: VrPoseWindow,
    cfg: ArmShareConfig,
    base_from_device: Rotation,
    ema_lin: EmaFilter,
    ema_ang: EmaFilter,
) -> Twist:
    """
    Residual twist of the operator's wrist.

    Linear velocity is `(p_t - p_{t-k}) / ΔT` and angular velocity is
    `log(R_{t-k}⁻¹ R_t) / ΔT`, re-expressed from the device body frame into
    the device world frame with `R_t`. Both are EMA smoothed, then rotated
    into the robot base frame.

    Parameters
    ----------
    window:
        VR pose window
    cfg:
        Arm sharing settings
    base_from_device:
        Calibration rotation from device frame to base frame
    ema_lin:
        Linear channel filter, updated in place
    ema_ang:
        Angular channel filter, updated in place

    Returns
    -------
    :
        Residual twist, or `None` if the window holds fewer than `k + 1`
        samples
    """
    k = cfg.window_ticks
    if len(window) < k + 1:
        return None

    _, pose_now = window.newest()
    _, pose_then = window.back(k)
    dt = cfg.window_period

    lin = (pose_now.position - pose_then.position) / dt
    body = so3_log(pose_then.rotation.inverse() @ pose_now.rotation) / dt
    ang = pose_now.rotation.apply(body)

    lin = ema_lin.step(lin)
    ang = ema_ang.step(ang)
    return Twist(linear=base_from_device.apply(lin), angular=base_from_device.apply(ang))


def compose_target(policy_pose: Pose, residual: Twist, cfg: ArmShareConfig) -> Pose:
    """
    Compose a residual twist with a policy target: translation is added in
    the base frame, rotation is post-multiplied as a body-frame increment.
    The residual angular velocity is given in the base frame and mapped to
    the target body frame with `R⁻¹` before exponentiation.

    Parameters
    ----------
    policy_pose:
        Policy target pose
    residual:
        Residual twist
    cfg:
        Arm sharing settings

    Returns
    -------
    :
        `(p + g_p v Δt, R exp(g_R R⁻¹ω Δt))`
    """
    dt = cfg.control_period
    dp = cfg.gain_position * residual.linear * dt
    rotvec = cfg.gain_rotation * residual.angular * dt
    rotation = policy_pose.rotation
    if rotvec.any():
        rotation = rotation @ so3_exp(rotation.inverse().apply(rotvec))
    return Pose(position=policy_pose.position + dp, rotation=rotation)


def apply_residual(
    policy: ArmCommand, residual: Twist, beta: float, cfg: ArmShareConfig
) -> ArmCommand:
    """Policy command with its target composed with `beta * residual`"""
    return ArmCommand(
        target=compose_target(policy.target, residual.scaled(beta), cfg),
        twist=policy.twist,
        feedforward=policy.feedforward,
    )


def pd_track(
    current: Pose,
    current_vel: Twist,
    target: Pose,
    feedforward: Twist,
    cfg: ArmShareConfig,
) -> Twist:
    """
    Task-space PD tracker.

    Parameters
    ----------
    current:
        Current end-effector pose
    current_vel:
        Current end-effector twist
    target:
        Target pose
    feedforward:
        Feedforward twist
    cfg:
        Arm sharing settings

    Returns
    -------
    :
        Commanded twist, angular part in the base frame
    """
    lin = (
        cfg.kp_pos * (target.position - current.position)
        - cfg.kd_pos * current_vel.linear
        + feedforward.linear
    )
    err = so3_log(current.rotation.inverse() @ target.rotation)
    ang = (
        cfg.kp_rot * current.rotation.apply(err)
        - cfg.kd_rot * current_vel.angular
        + feedforward.angular
    )
    return Twist(linear=lin, angular=ang)


def integrate_twist(pose: Pose, twist: Twist, dt: float) -> Pose:
    """
    Kinematic integration of a base-frame twist over `dt`.
    """
    return Pose(
        position=pose.position + twist.linear * dt,
        rotation=so3_exp(twist.angular * dt) @ pose.rotation,
    )


# --------------------------------------------------------------------------- #
# Controller                                                                  #
# --------------------------------------------------------------------------- #


class ResidualArmController:
    """
    Per-stream residual arm controller owning the VR window, the EMA filters
    and the residual application state.

    Parameters
    ----------
    cfg:
        Arm sharing settings
    """

    def __init__(self, cfg: ArmShareConfig = None):
        self.cfg = cfg or ArmShareConfig()
        self.base_from_device = Rotation.from_rotvec(self.cfg.base_from_device_rotvec)
        self.window = VrPoseWindow(maxlen=self.cfg.window_ticks + 1)
        self.ema_lin = EmaFilter(a=self.cfg.ema_a)
        self.ema_ang = EmaFilter(a=self.cfg.ema_a)
        self.offset_position = np.zeros(3)
        self.offset_rotvec = np.zeros(3)
        self.dropout = False

    def reset_filters(self) -> None:
        self.ema_lin.reset()
        self.ema_ang.reset()

    def reset(self) -> None:
        self.window.clear()
        self.reset_filters()
        self.offset_position = np.zeros(3)
        self.offset_rotvec = np.zeros(3)
        self.dropout = False

    def push_vr(self, timestamp: float, pose: Pose) -> None:
        self.window.push(timestamp, pose)

    def residual(self, now: float) -> Twist:
        """
        Current residual twist. Zero when the window is not ready or when the
        newest VR sample is stale (fail-safe, filters are reset).
        """
        if len(self.window) == 0:
            return Twist.zero()

        t_newest, _ = self.window.newest()
        stale = now - t_newest > self.cfg.dropout_ticks * self.cfg.tick_period + 1e-9
        if stale:
            if not self.dropout:
                logger.warning(
                    f"VR stream stale for {now - t_newest:.3f} s, residual forced to zero"
                )
            self.dropout = True
            self.reset_filters()
            return Twist.zero()
        self.dropout = False

        twist = estimate_residual_twist(
            self.window, self.cfg, self.base_from_device, self.ema_lin, self.ema_ang
        )
        if twist is None:
            return Twist.zero()
        return twist

    def step(
        self, policy: ArmCommand, beta: float, now: float
    ) -> tuple[ArmCommand, Twist]:
        """
        Fuse the policy arm command with the operator residual.

        Parameters
        ----------
        policy:
            Policy arm command
        beta:
            Arm authority weight in [0, 1]
        now:
            Current control time (s)

        Returns
        -------
        :
            Fused command and the unscaled residual twist
        """
        residual = self.residual(now)

        if self.cfg.residual_application == "live":
            return apply_residual(policy, residual, beta, self.cfg), residual

        # Integrated offset, accumulated in the base frame
        scaled = residual.scaled(beta)
        dt = self.cfg.control_period
        keep = 1.0 - self.cfg.offset_decay
        self.offset_position = (
            keep * self.offset_position + self.cfg.gain_position * scaled.linear * dt
        )
        offset_r = so3_exp(self.cfg.gain_rotation * scaled.angular * dt) @ so3_exp(
            keep * self.offset_rotvec
        )
        self.offset_rotvec = so3_log(offset_r)
        target = Pose(
            position=policy.target.position + self.offset_position,
            rotation=offset_r @ policy.target.rotation,
        )

        command = ArmCommand(
            target=target,
            twist=policy.twist,
            feedforward=policy.feedforward,
        )
        return command, residual
