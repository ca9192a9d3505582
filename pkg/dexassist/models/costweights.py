from typing import Any

from pydantic import Field
from pydantic import model_validator

from dexassist.models.basemodel import BaseModel


class CostWeights(BaseModel):
    """
    Parameters of the relative retargeting cost. Distances are measured on
    the normalized human hand (thumb-to-finger distance `d`).

    Attributes
    ----------
    huber_delta:
        Huber knee `δ` applied to every residual norm (m)
    d_lo:
        Thumb distance at and below which the shaping gate is `beta_min` (m)
    d_hi:
        Thumb distance at and above which the shaping gate is 1 (m)
    beta_min:
        Shaping gate floor, reached in a pinch
    d_on:
        Thumb distance at and below which the pinch activation is 0 (m)
    d_off:
        Thumb distance at and above which the pinch activation is 1 (m)
    omega_max:
        Grasp weight in a full pinch
    gamma:
        Safety hinge weight
    d_safe:
        Safety margin on collision pair distances (m)
    lambda_reg:
        Temporal regularization weight
    opposition_fingers:
        Fingers paired with the thumb in the grasp term. All non-thumb fingers
        if `None`.

    Examples
    --------
    ```py
    from dexassist.models import CostWeights

    w = CostWeights(gamma=200.0, opposition_fingers=[1, 2])
    print(w.d_safe)
    # > 0.01
    ```
    """

    huber_delta: float = Field(0.01, gt=0.0)
    d_lo: float = Field(0.03, gt=0.0)
    d_hi: float = 0.08
    beta_min: float = Field(0.1, ge=0.0, lt=1.0)
    d_on: float = Field(0.02, gt=0.0)
    d_off: float = 0.05
    omega_max: float = Field(2.0, ge=0.0)
    gamma: float = Field(100.0, gt=0.0)
    d_safe: float = Field(0.01, gt=0.0)
    lambda_reg: float = Field(0.05, gt=0.0)
    opposition_fingers: list[int] = None

    @model_validator(mode="after")
    def check_thresholds(self) -> Any:
        if not self.d_lo < self.d_hi:
            raise ValueError("`d_lo` must be smaller than `d_hi`.")
        if not self.d_on < self.d_off:
            raise ValueError("`d_on` must be smaller than `d_off`.")
        if self.opposition_fingers is not None:
            if 0 in self.opposition_fingers:
                raise ValueError("The thumb (0) cannot be an opposition finger.")
            if len(set(self.opposition_fingers)) != len(self.opposition_fingers):
                raise ValueError("`opposition_fingers` must not contain duplicates.")
        return self

    def resolve_opposition_fingers(self, n_fingers: int) -> list[int]:
        """Opposition fingers for a hand with `n_fingers` chains"""
        if self.opposition_fingers is None:
            return list(range(1, n_fingers))
        return sorted(self.opposition_fingers)
