"""
Hand key vectors: wrist-to-fingertip vectors `v` and thumb-to-fingertip
opposition vectors `u`, for the robot hand and for the normalized human hand.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable
from typing import Union

import numpy as np
from pydantic import Field
from pydantic import field_validator

from dexassist._logger import get_logger
from dexassist.constants import THUMB
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import InvalidFingerError
from dexassist.models.basemodel import BaseModel
from dexassist.models.handmodel import HandModel
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.typing import Vector3

logger = get_logger(__name__)


# --------------------------------------------------------------------------- #
# Key Vectors                                                                 #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class KeyVectors:
    """
    Hand shape descriptor expressed in the robot wrist frame.

    Attributes
    ----------
    wrist_to_tip:
        Wrist-to-fingertip vectors, shape (n_chains, 3), thumb first (m)
    opposition:
        Thumb-tip-to-fingertip vectors of every non-thumb finger, shape
        (n_chains - 1, 3). Row `j - 1` belongs to finger `j` (m).
    """

    wrist_to_tip: np.ndarray
    opposition: np.ndarray

    @classmethod
    def from_wrist_to_tip(cls, wrist_to_tip) -> "KeyVectors":
        v = np.asarray(wrist_to_tip, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise DimensionMismatchError(
                name="wrist_to_tip", expected="(n, 3)", got=v.shape
            )
        return cls(wrist_to_tip=v, opposition=v[1:] - v[THUMB])

    @property
    def n_fingers(self) -> int:
        return self.wrist_to_tip.shape[0]

    def opposition_of(self, finger: int) -> np.ndarray:
        if not 1 <= finger < self.n_fingers:
            raise InvalidFingerError(finger, self.n_fingers)
        return self.opposition[finger - 1]

    def __sub__(self, other: "KeyVectors") -> "KeyVectors":
        if self.wrist_to_tip.shape != other.wrist_to_tip.shape:
            raise DimensionMismatchError(
                name="wrist_to_tip",
                expected=self.wrist_to_tip.shape,
                got=other.wrist_to_tip.shape,
            )
        return KeyVectors(
            wrist_to_tip=self.wrist_to_tip - other.wrist_to_tip,
            opposition=self.opposition - other.opposition,
        )


RelativeDeltas = KeyVectors
"""Key vector changes since the intervention anchor"""


def robot_keyvectors(model: HandModel, q) -> KeyVectors:
    """
    Key vectors of the robot hand at configuration `q`.

    Parameters
    ----------
    model:
        Hand model
    q:
        Joint vector (rad)

    Returns
    -------
    :
        Robot key vectors
    """
    return KeyVectors.from_wrist_to_tip(model.fk_fingertips(q))


def relative_deltas(current: KeyVectors, anchor: KeyVectors) -> RelativeDeltas:
    """
    Change of key vectors since the anchor, component-wise for both vector
    families. `relative_deltas(x, x)` is exactly zero.
    """
    return current - anchor


def thumb_distance(kv: KeyVectors, finger: int) -> float:
    """
    Thumb-to-finger distance.

    Parameters
    ----------
    kv:
        Key vectors
    finger:
        Non-thumb finger index

    Returns
    -------
    :
        Norm of the opposition vector (m)
    """
    return float(np.linalg.norm(kv.opposition_of(finger)))


# --------------------------------------------------------------------------- #
# Human samples                                                               #
# --------------------------------------------------------------------------- #


class HumanHandSample(BaseModel):
    """
    Tracked human hand at one instant, in the tracking (world) frame.

    Attributes
    ----------
    timestamp:
        Time (s)
    wrist_position:
        Wrist position (m)
    wrist_quat:
        Wrist orientation as quaternion (x, y, z, w)
    tips:
        Fingertip positions, thumb first (m)
    """

    timestamp: float
    wrist_position: Vector3
    wrist_quat: list[float] = Field(..., min_length=4, max_length=4)
    tips: list[Vector3] = Field(..., min_length=1)

    @field_validator("wrist_quat")
    @classmethod
    def non_zero_quat(cls, value: list[float]) -> list[float]:
        if np.linalg.norm(value) < 1e-12:
            raise ValueError("`wrist_quat` must be non-zero.")
        return value

    @property
    def wrist_pose(self) -> Pose:
        return Pose(
            position=np.array(self.wrist_position),
            rotation=Rotation.from_quat(self.wrist_quat),
        )

    @property
    def tips_array(self) -> np.ndarray:
        return np.array(self.tips, dtype=float)

    def local_tips(self) -> np.ndarray:
        """Fingertips in the human wrist frame"""
        wrist = self.wrist_pose
        return wrist.rotation.inverse().apply(self.tips_array - wrist.position)


@dataclass(frozen=True, eq=False)
class NormalizationMap:
    """
    Mapping from human wrist frame to robot wrist frame.

    Attributes
    ----------
    rotation:
        Human-wrist to robot-wrist frame rotation
    scales:
        Per-finger length ratio (robot / human), thumb first
    """

    rotation: Rotation
    scales: np.ndarray

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=float)
        if not (scales > 0).all():
            raise ValueError(f"Normalization scales must be positive, got {scales}")
        object.__setattr__(self, "scales", scales)

    @classmethod
    def identity(cls, n_fingers: int) -> "NormalizationMap":
        return cls(rotation=Rotation.identity(), scales=np.ones(n_fingers))


def normalize_human(sample: HumanHandSample, map: NormalizationMap) -> KeyVectors:
    """
    Human key vectors expressed in the robot wrist frame with per-finger scale
    normalization: `v_i = s_i * R_map * R_wrist^T * (tip_i - wrist)`.

    Parameters
    ----------
    sample:
        Human hand sample
    map:
        Calibrated normalization map

    Returns
    -------
    :
        Normalized human key vectors
    """
    local = sample.local_tips()
    if local.shape[0] != map.scales.shape[0]:
        raise DimensionMismatchError(
            name="tips", expected=map.scales.shape[0], got=local.shape[0]
        )
    v = map.scales[:, None] * map.rotation.apply(local)
    return KeyVectors.from_wrist_to_tip(v)


def calibrate_normalization(
    model: HandModel,
    calibration_sample: HumanHandSample,
    frame_rotation: Rotation = None,
) -> NormalizationMap:
    """
    Build the normalization map from a single calibration sample captured
    with the human hand open. Each finger scale is the robot wrist-to-tip
    length at the reference open pose divided by the human one.

    Parameters
    ----------
    model:
        Robot hand model
    calibration_sample:
        Human sample with an open hand
    frame_rotation:
        Human-wrist to robot-wrist rotation. Identity if `None`.

    Returns
    -------
    :
        Normalization map
    """
    if frame_rotation is None:
        frame_rotation = Rotation.identity()
    robot = np.linalg.norm(model.fk_fingertips(model.reference_open_config()), axis=1)
    human = np.linalg.norm(calibration_sample.local_tips(), axis=1)
    if human.shape != robot.shape:
        raise DimensionMismatchError(
            name="tips", expected=robot.shape[0], got=human.shape[0]
        )
    if (human <= 0).any():
        raise ValueError("Calibration sample has a fingertip at the wrist origin.")
    scales = robot / human
    logger.debug(f"Calibrated normalization scales {np.round(scales, 4).tolist()}")
    return NormalizationMap(rotation=frame_rotation, scales=scales)


# --------------------------------------------------------------------------- #
# Stream files                                                                #
# --------------------------------------------------------------------------- #


def write_human_stream(
    samples: Iterable[HumanHandSample], path: Union[str, Path]
) -> None:
    """Write human samples as JSON lines, one sample per line"""
    with open(path, "w") as fp:
        for s in samples:
            fp.write(s.model_dump_json() + "\n")


def read_human_stream(path: Union[str, Path]) -> list[HumanHandSample]:
    """
    Read a JSON lines human stream.

    Raises
    ------
    ValueError
        If timestamps are not monotone.
    """
    samples = []
    with open(path, "r") as fp:
        for line in fp:
            if not line.strip():
                continue
            s = HumanHandSample.model_validate_json(line)
            if samples and s.timestamp < samples[-1].timestamp:
                raise ValueError(
                    f"Human stream timestamps must be monotone ({s.timestamp} after "
                    f"{samples[-1].timestamp})."
                )
            samples += [s]
    return samples
