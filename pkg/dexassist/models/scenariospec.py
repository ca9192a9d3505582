from pathlib import Path
from typing import Any
from typing import Literal
from typing import Union

from pydantic import Field
from pydantic import model_validator

from dexassist._logger import get_logger
from dexassist.constants import BUNDLED_SCENARIOS
from dexassist.models.basemodel import BaseModel
from dexassist.typing import Vector3

logger = get_logger(__name__)

SCENARIOS_DIRPATH = Path(__file__).parent.parent / "resources" / "scenarios"


# --------------------------------------------------------------------------- #
# Human stream                                                                #
# --------------------------------------------------------------------------- #


class FingerCurve(BaseModel):
    """
    Periodic open/close motion of one human finger, added to the flexion
    joints of the chain: `amplitude * (1 - cos(2π f t + phase)) / 2`.
    Positive amplitudes close the finger.

    Attributes
    ----------
    chain:
        Chain index (0 is the thumb)
    amplitude:
        Peak flexion change (rad)
    frequency:
        Frequency (Hz)
    phase:
        Phase (rad)
    """

    chain: int = Field(..., ge=0)
    amplitude: float = 0.0
    frequency: float = Field(0.5, ge=0.0)
    phase: float = 0.0


class PinchSpec(BaseModel):
    """
    Human pinch: the thumb tip and one fingertip move toward their midpoint.
    The closure ramps smoothly from 0 at `start` to `closure` at
    `start + duration`. A closure of 1 brings the tips into contact.

    Attributes
    ----------
    finger:
        Non-thumb finger index
    start:
        Ramp start time (s)
    duration:
        Ramp duration (s)
    closure:
        Final closure fraction
    """

    finger: int = Field(1, ge=1)
    start: float = Field(0.0, ge=0.0)
    duration: float = Field(0.2, gt=0.0)
    closure: float = Field(1.0, ge=0.0)


class WristMotionSpec(BaseModel):
    """
    Operator wrist motion in the tracking frame: constant velocity between
    `start` and `stop`, still otherwise.

    Attributes
    ----------
    position:
        Initial wrist position (m)
    rotvec:
        Initial wrist orientation as a rotation vector (rad)
    linear_velocity:
        Linear velocity while moving (m/s)
    angular_velocity:
        Angular velocity while moving, tracking frame (rad/s)
    start:
        Motion start (s)
    stop:
        Motion stop (s). Never stops if `None`.
    """

    position: Vector3 = [0.0, 0.0, 0.0]
    rotvec: Vector3 = [0.0, 0.0, 0.0]
    linear_velocity: Vector3 = [0.0, 0.0, 0.0]
    angular_velocity: Vector3 = [0.0, 0.0, 0.0]
    start: float = Field(0.0, ge=0.0)
    stop: Union[float, None] = None

    @model_validator(mode="after")
    def check_times(self) -> Any:
        if self.stop is not None and self.stop < self.start:
            raise ValueError("Wrist motion `stop` must not precede `start`.")
        return self


class HumanStreamSpec(BaseModel):
    """
    Synthetic operator hand stream. The human joint pose is the policy hand
    pose offset by `misalignment` radians (joint L2) toward the open pose,
    plus finger curves; tracked fingertips are the robot fingertips of that
    pose scaled by `hand_scale`, expressed in a wrist frame rotated by
    `frame_rotvec`, with Gaussian noise.

    Attributes
    ----------
    misalignment:
        Joint-space offset `m` between the human-implied and the policy hand
        pose (rad)
    misalignment_range:
        If set, `m` is drawn uniformly in this range from the scenario seed
    noise_sigma:
        Fingertip position noise standard deviation (m)
    hand_scale:
        Human to robot hand size ratio
    frame_rotvec:
        Human wrist to robot wrist frame rotation, as a rotation vector (rad)
    curves:
        Finger open/close curves
    pinch:
        Pinch gesture
    wrist:
        Wrist motion, also streamed as VR poses
    vr_dropouts:
        Time intervals `[start, stop)` without VR samples (s)
    """

    misalignment: float = Field(0.0, ge=0.0)
    misalignment_range: Union[tuple[float, float], None] = None
    noise_sigma: float = Field(5e-4, ge=0.0)
    hand_scale: float = Field(1.1, gt=0.0)
    frame_rotvec: Vector3 = [0.0, 0.0, 0.0]
    curves: list[FingerCurve] = []
    pinch: Union[PinchSpec, None] = None
    wrist: WristMotionSpec = WristMotionSpec()
    vr_dropouts: list[tuple[float, float]] = []

    @model_validator(mode="after")
    def check_ranges(self) -> Any:
        if self.misalignment_range is not None:
            lo, hi = self.misalignment_range
            if not 0.0 <= lo <= hi:
                raise ValueError(
                    "`misalignment_range` must satisfy 0 <= low <= high, got "
                    f"{self.misalignment_range}."
                )
        for lo, hi in self.vr_dropouts:
            if hi <= lo:
                raise ValueError(f"VR dropout [{lo}, {hi}) is empty.")
        return self


# --------------------------------------------------------------------------- #
# Policy stream                                                               #
# --------------------------------------------------------------------------- #


class PolicyStreamSpec(BaseModel):
    """
    Scripted policy. The hand oscillates around a grasp on its flexion
    joints; the arm target moves at constant velocity.

    Attributes
    ----------
    grasp:
        Grasp joint vector (rad). A model-dependent power grasp if `None`.
    hand_amplitude:
        Flexion oscillation amplitude (rad)
    hand_frequency:
        Flexion oscillation frequency (Hz)
    arm_position:
        Initial arm target position (m)
    arm_rotvec:
        Initial arm target orientation as a rotation vector (rad)
    arm_linear_velocity:
        Arm target linear velocity, also the feedforward (m/s)
    arm_angular_velocity:
        Arm target angular velocity, also the feedforward (rad/s)
    """

    grasp: Union[list[float], None] = None
    hand_amplitude: float = Field(0.02, ge=0.0)
    hand_frequency: float = Field(0.5, ge=0.0)
    arm_position: Vector3 = [0.4, 0.0, 0.3]
    arm_rotvec: Vector3 = [0.0, 0.0, 0.0]
    arm_linear_velocity: Vector3 = [0.0, 0.0, 0.0]
    arm_angular_velocity: Vector3 = [0.0, 0.0, 0.0]


# --------------------------------------------------------------------------- #
# Scenario                                                                    #
# --------------------------------------------------------------------------- #


class ToggleSpec(BaseModel):
    """
    Scheduled intervention toggle.

    Attributes
    ----------
    time:
        Toggle time (s)
    kind:
        Requested mode
    beta_arm:
        Arm authority of a `COPILOT` toggle. Configuration default if `None`.
    beta_hand:
        Hand authority of a `COPILOT` toggle. Configuration default if `None`.
    """

    time: float = Field(..., ge=0.0)
    kind: Literal["AUTONOMOUS", "FULL_TAKEOVER", "COPILOT"]
    beta_arm: float = Field(None, ge=0.0, le=1.0)
    beta_hand: float = Field(None, ge=0.0, le=1.0)


class ScenarioSpec(BaseModel):
    """
    Scripted intervention scenario.

    Attributes
    ----------
    name:
        Scenario name
    seed:
        Default seed
    duration:
        Duration (s)
    human:
        Operator stream
    policy:
        Policy stream
    toggles:
        Toggle schedule, sorted by time

    Examples
    --------
    ```py
    from dexassist.models import ScenarioSpec

    spec = ScenarioSpec.load("open_hand_misaligned")
    print([t.kind for t in spec.toggles][:2])
    # > ['FULL_TAKEOVER', 'AUTONOMOUS']
    ```
    """

    name: str = "scenario"
    seed: int = 0
    duration: float = Field(1.2, gt=0.0)
    human: HumanStreamSpec = HumanStreamSpec()
    policy: PolicyStreamSpec = PolicyStreamSpec()
    toggles: list[ToggleSpec] = []

    @model_validator(mode="after")
    def check_toggles(self) -> Any:
        times = [t.time for t in self.toggles]
        if times != sorted(times):
            raise ValueError("Toggles must be sorted by time.")
        for t in times:
            if t >= self.duration:
                raise ValueError(
                    f"Toggle at {t} s is outside the scenario duration "
                    f"({self.duration} s)."
                )
        if self.human.pinch is not None:
            if self.human.pinch.start > self.duration:
                raise ValueError("Pinch starts after the end of the scenario.")
        return self

    @classmethod
    def load(cls, name_or_path: Union[str, Path]) -> "ScenarioSpec":
        """
        Load a bundled scenario by name or a scenario file by path.

        Parameters
        ----------
        name_or_path:
            One of the bundled scenario names or a path to a YAML file.

        Returns
        -------
        :
            Scenario specification
        """
        if str(name_or_path) in BUNDLED_SCENARIOS:
            filepath = SCENARIOS_DIRPATH / f"{name_or_path}.yaml"
        else:
            filepath = Path(name_or_path)
        logger.info(f"Reading scenario from {filepath}")
        with open(filepath, "r") as fp:
            return cls.model_validate_yaml(fp)
