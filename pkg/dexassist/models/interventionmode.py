from typing import Any
from typing import Literal

from pydantic import Field
from pydantic import model_validator

from dexassist.models.basemodel import BaseModel

COPILOT_DEFAULT_BETA = 0.3


class InterventionMode(BaseModel):
    """
    Authority split between the policy and the operator.

    `AUTONOMOUS` executes the policy (both weights 0), `FULL_TAKEOVER` gives
    the operator full authority (both weights 1) and `COPILOT` keeps the
    policy primary with weighted operator input.

    Attributes
    ----------
    kind:
        Mode kind
    beta_arm:
        Operator authority on the arm residual, in [0, 1]
    beta_hand:
        Operator authority on the hand command, in [0, 1]

    Examples
    --------
    ```py
    from dexassist.models import InterventionMode

    mode = InterventionMode(kind="COPILOT")
    print(mode.beta_hand)
    # > 0.3
    ```
    """

    kind: Literal["AUTONOMOUS", "FULL_TAKEOVER", "COPILOT"] = "AUTONOMOUS"
    beta_arm: float = Field(None, ge=0.0, le=1.0)
    beta_hand: float = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="before")
    @classmethod
    def default_betas(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        kind = data.get("kind", "AUTONOMOUS")
        default = {
            "AUTONOMOUS": 0.0,
            "FULL_TAKEOVER": 1.0,
            "COPILOT": COPILOT_DEFAULT_BETA,
        }.get(kind)
        for k in ["beta_arm", "beta_hand"]:
            if data.get(k) is None:
                data[k] = default
        return data

    @model_validator(mode="after")
    def check_betas(self) -> Any:
        if self.kind == "AUTONOMOUS" and (self.beta_arm != 0 or self.beta_hand != 0):
            raise ValueError("AUTONOMOUS mode requires zero authority weights.")
        if self.kind == "FULL_TAKEOVER" and (
            self.beta_arm != 1 or self.beta_hand != 1
        ):
            raise ValueError("FULL_TAKEOVER mode requires unit authority weights.")
        return self

    @property
    def engaged(self) -> bool:
        return self.kind != "AUTONOMOUS"

    @classmethod
    def autonomous(cls) -> "InterventionMode":
        return cls(kind="AUTONOMOUS")

    @classmethod
    def full_takeover(cls) -> "InterventionMode":
        return cls(kind="FULL_TAKEOVER")

    @classmethod
    def copilot(cls, beta_arm: float = None, beta_hand: float = None) -> "InterventionMode":
        return cls(kind="COPILOT", beta_arm=beta_arm, beta_hand=beta_hand)


class InterventionConfig(BaseModel):
    """
    Intervention settings.

    Attributes
    ----------
    copilot_beta_arm:
        Arm authority used by `COPILOT` toggles that do not set it
    copilot_beta_hand:
        Hand authority used by `COPILOT` toggles that do not set it
    """

    copilot_beta_arm: float = Field(COPILOT_DEFAULT_BETA, ge=0.0, le=1.0)
    copilot_beta_hand: float = Field(COPILOT_DEFAULT_BETA, ge=0.0, le=1.0)

    def make_mode(
        self, kind: str, beta_arm: float = None, beta_hand: float = None
    ) -> InterventionMode:
        """
        Build a mode, filling unset `COPILOT` weights from this configuration.
        """
        if kind == "COPILOT":
            if beta_arm is None:
                beta_arm = self.copilot_beta_arm
            if beta_hand is None:
                beta_hand = self.copilot_beta_hand
        return InterventionMode(kind=kind, beta_arm=beta_arm, beta_hand=beta_hand)
