"""
Deterministic scenario streams: policy hand and arm trajectories, synthetic
tracked human hand samples, VR wrist poses and the toggle schedule, all
generated from a scenario specification and a seed.
"""

import math
from dataclasses import dataclass

import numpy as np

from dexassist._logger import get_logger
from dexassist.armshare import ArmCommand
from dexassist.keyvec import HumanHandSample
from dexassist.keyvec import NormalizationMap
from dexassist.keyvec import calibrate_normalization
from dexassist.models.handmodel import HandModel
from dexassist.models.scenariospec import HumanStreamSpec
from dexassist.models.scenariospec import ScenarioSpec
from dexassist.models.scenariospec import ToggleSpec
from dexassist.models.scenariospec import WristMotionSpec
from dexassist.models.simconfig import RolloutConfig
from dexassist.retarget.gates import smoothstep
from dexassist.sim.policy import flexion_mask
from dexassist.sim.policy import policy_arm_trajectory
from dexassist.sim.policy import policy_grasp
from dexassist.sim.policy import policy_hand_trajectory
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.spatial import so3_exp

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    Generated scenario streams.

    Attributes
    ----------
    spec:
        Source specification
    seed:
        Seed used for generation
    misalignment:
        Realized joint-space misalignment `m` (rad)
    times:
        Control times (s)
    policy_hand:
        Policy hand commands, `len(times) + H - 1` rows (rad)
    policy_arm:
        Policy arm commands aligned with `policy_hand`
    human_joints:
        Joint pose implied by the human hand at each control step (rad)
    human:
        Tracked human hand samples, one per control step
    vr:
        VR wrist poses `(timestamp, pose)` in the device frame
    toggles:
        Toggle schedule as `(step, toggle)`
    calibration:
        Open-hand calibration sample
    normalization:
        Normalization map calibrated from `calibration`
    q_calibration:
        Human joint pose at the first step, used to initialize absolute
        teleoperation
    """

    spec: ScenarioSpec
    seed: int
    misalignment: float
    times: np.ndarray
    policy_hand: np.ndarray
    policy_arm: list[ArmCommand]
    human_joints: np.ndarray
    human: list[HumanHandSample]
    vr: list[tuple[float, Pose]]
    toggles: list[tuple[int, ToggleSpec]]
    calibration: HumanHandSample
    normalization: NormalizationMap
    q_calibration: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.times)

    @property
    def engage_steps(self) -> list[int]:
        return [s for s, t in self.toggles if t.kind != "AUTONOMOUS"]


# --------------------------------------------------------------------------- #
# Human stream                                                                #
# --------------------------------------------------------------------------- #


def wrist_pose(spec: WristMotionSpec, t: float) -> Pose:
    """Operator wrist pose in the tracking frame at time `t`"""
    stop = math.inf if spec.stop is None else spec.stop
    tau = min(max(t, spec.start), stop) - spec.start
    p0 = np.array(spec.position, dtype=float)
    v = np.array(spec.linear_velocity, dtype=float)
    w = np.array(spec.angular_velocity, dtype=float)
    return Pose(
        position=p0 + v * tau,
        rotation=so3_exp(w * tau) @ Rotation.from_rotvec(spec.rotvec),
    )


def misalignment_direction(model: HandModel, grasp: np.ndarray) -> np.ndarray:
    """Unit joint-space direction from the grasp toward the reference open pose"""
    d = model.reference_open_config() - grasp
    norm = np.linalg.norm(d)
    if norm == 0.0:
        return np.zeros_like(d)
    return d / norm


def human_joint_trajectory(
    spec: HumanStreamSpec,
    model: HandModel,
    policy_hand: np.ndarray,
    times: np.ndarray,
    misalignment: float,
    grasp: np.ndarray,
) -> np.ndarray:
    """
    Joint pose implied by the human hand: policy pose offset by the
    misalignment toward the open pose, plus finger curves, within limits.
    """
    q = policy_hand + misalignment * misalignment_direction(model, grasp)[None, :]
    for curve in spec.curves:
        if curve.chain >= model.n_chains:
            raise ValueError(
                f"Finger curve references chain {curve.chain}, model has "
                f"{model.n_chains} chains."
            )
        phase = 2.0 * np.pi * curve.frequency * times + curve.phase
        flex = curve.amplitude * 0.5 * (1.0 - np.cos(phase))
        q = q + flex[:, None] * flexion_mask(model, curve.chain)[None, :]
    return np.clip(q, model.lower_limits, model.upper_limits)


def human_local_tips(
    spec: HumanStreamSpec, model: HandModel, q_human, t: float = None
) -> np.ndarray:
    """
    Human fingertips in the human wrist frame, without noise.

    Parameters
    ----------
    spec:
        Human stream specification
    model:
        Robot hand model
    q_human:
        Human joint pose (rad)
    t:
        Time (s), used by the pinch ramp. No pinch if `None`.
    """
    tips = model.fk_fingertips(q_human).copy()
    pinch = spec.pinch
    if pinch is not None and t is not None:
        if pinch.finger >= model.n_chains:
            raise ValueError(
                f"Pinch finger {pinch.finger} is not a chain of the model."
            )
        c = pinch.closure * float(smoothstep((t - pinch.start) / pinch.duration))
        mid = 0.5 * (tips[0] + tips[pinch.finger])
        tips[0] = tips[0] + c * (mid - tips[0])
        tips[pinch.finger] = tips[pinch.finger] + c * (mid - tips[pinch.finger])
    frame = Rotation.from_rotvec(spec.frame_rotvec)
    return frame.inverse().apply(spec.hand_scale * tips)


def human_sample(
    t: float, wrist: Pose, local_tips: np.ndarray, noise: np.ndarray = None
) -> HumanHandSample:
    tips = wrist.position + wrist.rotation.apply(local_tips)
    if noise is not None:
        tips = tips + noise
    return HumanHandSample(
        timestamp=float(t),
        wrist_position=wrist.position.tolist(),
        wrist_quat=wrist.rotation.quat.tolist(),
        tips=tips.tolist(),
    )


# --------------------------------------------------------------------------- #
# Scenario                                                                    #
# --------------------------------------------------------------------------- #


def toggle_step(time: float, dt: float) -> int:
    """First control step at or after `time`"""
    return int(math.ceil(time / dt - 1e-9))


def generate_scenario(
    spec: ScenarioSpec,
    model: HandModel,
    rollout: RolloutConfig = None,
    seed: int = None,
) -> Scenario:
    """
    Generate the streams of a scenario. Identical inputs produce identical
    streams.

    Parameters
    ----------
    spec:
        Scenario specification
    model:
        Robot hand model
    rollout:
        Replay settings (control period, VR tick, policy horizon)
    seed:
        Seed. Specification seed if `None`.

    Returns
    -------
    :
        Scenario streams

    Examples
    --------
    ```py
    from dexassist.models import HandModel
    from dexassist.models import ScenarioSpec
    from dexassist.sim import generate_scenario

    model = HandModel.load("hand21")
    scenario = generate_scenario(ScenarioSpec.load("open_hand_misaligned"), model)
    print(scenario.engage_steps)
    # > [10, 30, 50]
    ```
    """
    if rollout is None:
        rollout = RolloutConfig()
    if seed is None:
        seed = spec.seed
    rng = np.random.default_rng(seed)
    hs = spec.human

    m = hs.misalignment
    if hs.misalignment_range is not None:
        m = float(rng.uniform(*hs.misalignment_range))

    dt = rollout.control_period
    n = int(round(spec.duration / dt))
    times = np.arange(n) * dt

    # Policy streams extend past the end for the last chunks
    policy_times = np.arange(n + rollout.horizon - 1) * dt
    grasp = policy_grasp(spec.policy, model)
    policy_hand = policy_hand_trajectory(spec.policy, model, policy_times)
    policy_arm = policy_arm_trajectory(spec.policy, policy_times)

    human_joints = human_joint_trajectory(
        hs, model, policy_hand[:n], times, m, grasp
    )

    noise = rng.normal(0.0, hs.noise_sigma, size=(n, model.n_chains, 3))
    human = []
    for k, t in enumerate(times):
        local = human_local_tips(hs, model, human_joints[k], t)
        human += [human_sample(t, wrist_pose(hs.wrist, t), local, noise[k])]

    calibration = human_sample(
        0.0,
        wrist_pose(hs.wrist, 0.0),
        human_local_tips(hs, model, model.reference_open_config()),
    )
    normalization = calibrate_normalization(
        model, calibration, frame_rotation=Rotation.from_rotvec(hs.frame_rotvec)
    )

    vr = []
    n_vr = int(round(spec.duration / rollout.vr_tick))
    for i in range(n_vr):
        t = i * rollout.vr_tick
        if any(lo <= t < hi for lo, hi in hs.vr_dropouts):
            continue
        vr += [(float(t), wrist_pose(hs.wrist, t))]

    toggles = []
    for toggle in spec.toggles:
        step = toggle_step(toggle.time, dt)
        if toggle.kind != "AUTONOMOUS" and step < 1:
            raise ValueError(
                f"Intervention at {toggle.time} s engages before the first "
                "executed command."
            )
        toggles += [(step, toggle)]

    logger.debug(
        f"Generated scenario '{spec.name}' (seed {seed}, m={m:.4f} rad, "
        f"{n} steps)"
    )
    return Scenario(
        spec=spec,
        seed=seed,
        misalignment=m,
        times=times,
        policy_hand=policy_hand,
        policy_arm=policy_arm,
        human_joints=human_joints,
        human=human,
        vr=vr,
        toggles=toggles,
        calibration=calibration,
        normalization=normalization,
        q_calibration=human_joints[0].copy(),
    )
