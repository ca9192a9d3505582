from typing import Any
from typing import Literal

from pydantic import ConfigDict
from pydantic import Field
from pydantic import model_validator

from dexassist.constants import CORRECTION_LOG_SCHEMA
from dexassist.constants import CORRECTION_LOG_VERSION
from dexassist.models.basemodel import BaseModel
from dexassist.typing import Vector3


class ArmCommandRecord(BaseModel):
    """
    Serialized arm command.

    Attributes
    ----------
    target_position:
        Target position (m)
    target_quat:
        Target orientation as quaternion (x, y, z, w)
    twist_linear:
        Commanded linear velocity (m/s)
    twist_angular:
        Commanded angular velocity (rad/s)
    feedforward_linear:
        Feedforward linear velocity (m/s)
    feedforward_angular:
        Feedforward angular velocity (rad/s)
    """

    target_position: Vector3
    target_quat: list[float] = Field(..., min_length=4, max_length=4)
    twist_linear: Vector3 = [0.0, 0.0, 0.0]
    twist_angular: Vector3 = [0.0, 0.0, 0.0]
    feedforward_linear: Vector3 = [0.0, 0.0, 0.0]
    feedforward_angular: Vector3 = [0.0, 0.0, 0.0]


class CommandRecord(BaseModel):
    """
    Serialized hand and arm command with the mode it was emitted in.

    Attributes
    ----------
    timestamp:
        Emission time (s)
    mode:
        Intervention mode kind at emission
    hand:
        Hand joint command (rad)
    arm:
        Arm command
    """

    timestamp: float
    mode: Literal["AUTONOMOUS", "FULL_TAKEOVER", "COPILOT"] = "AUTONOMOUS"
    hand: list[float]
    arm: ArmCommandRecord


class HumanSummary(BaseModel):
    """
    Summary of the operator input at one control step.

    Attributes
    ----------
    thumb_distances:
        Normalized human thumb-to-finger distances, one per non-thumb finger (m)
    residual_norm:
        Norm of the unscaled residual twist
    """

    thumb_distances: list[float] = []
    residual_norm: float = 0.0


class CorrectionRecord(BaseModel):
    """
    One control step of an on-policy rollout. Autonomous steps are recorded
    too, with `intervention=False`.

    Attributes
    ----------
    kind:
        Line kind
    step:
        Control step index
    timestamp:
        Control time (s)
    observation_id:
        Observation snapshot reference
    executed:
        Executed (fused) command
    policy:
        Policy command of the same step
    human:
        Operator input summary
    intervention:
        `True` iff the executed mode is not `AUTONOMOUS`
    """

    kind: Literal["record"] = "record"
    step: int
    timestamp: float
    observation_id: str
    executed: CommandRecord
    policy: CommandRecord
    human: HumanSummary = HumanSummary()
    intervention: bool

    @model_validator(mode="after")
    def flag_matches_mode(self) -> Any:
        if self.intervention != (self.executed.mode != "AUTONOMOUS"):
            raise ValueError(
                f"Record {self.step}: intervention flag does not match mode "
                f"'{self.executed.mode}'."
            )
        return self


class CorrectionLogHeader(BaseModel):
    """
    First line of a correction log. Holds everything needed to replay the
    rollout.

    Attributes
    ----------
    kind:
        Line kind
    schema_name:
        Log schema name
    version:
        Log schema version
    method:
        Hand retargeting method
    seed:
        Scenario seed
    scenario:
        Scenario specification
    config:
        Simulation configuration
    """

    kind: Literal["header"] = "header"
    schema_name: Literal["correction-log"] = Field(
        CORRECTION_LOG_SCHEMA, alias="schema"
    )
    version: Literal[1] = CORRECTION_LOG_VERSION
    method: str
    seed: int
    scenario: dict[str, Any]
    config: dict[str, Any]

    model_config = ConfigDict(populate_by_name=True)


class CorrectionLogFooter(BaseModel):
    """
    Last line of a correction log.

    Attributes
    ----------
    kind:
        Line kind
    complete:
        `False` if the rollout was aborted
    count:
        Number of records
    reason:
        Abort reason
    """

    kind: Literal["footer"] = "footer"
    complete: bool
    count: int
    reason: str = None
