from typing import Literal

from pydantic import Field

from dexassist.models.basemodel import BaseModel
from dexassist.typing import Vector3


class ArmShareConfig(BaseModel):
    """
    Velocity-based shared arm control settings.

    Attributes
    ----------
    window_ticks:
        Finite difference span `k` in VR ticks
    tick_period:
        VR tick period (s)
    control_period:
        Control period `Δt` (s)
    gain_position:
        Residual translation gain `g_p`
    gain_rotation:
        Residual rotation gain `g_R`
    ema_a:
        EMA coefficient shared by the linear and angular channels
    kp_pos:
        Task-space position gain (1/s)
    kp_rot:
        Task-space orientation gain (1/s)
    kd_pos:
        Linear velocity damping
    kd_rot:
        Angular velocity damping
    residual_application:
        `live`: the residual is composed with the live policy target at every
        step and leaves no state. `integrated`: residual increments accumulate
        in an offset that decays by `offset_decay` per step.
    offset_decay:
        Fraction of the integrated offset removed at every step
    dropout_ticks:
        VR samples older than this many ticks force a zero residual
    base_from_device_rotvec:
        Calibration rotation from VR device frame to robot base frame, as a
        rotation vector (rad)

    Examples
    --------
    ```py
    from dexassist.models import ArmShareConfig

    cfg = ArmShareConfig()
    print(cfg.window_period)
    # > 0.04
    ```
    """

    window_ticks: int = Field(2, ge=1)
    tick_period: float = Field(0.02, gt=0.0)
    control_period: float = Field(0.02, gt=0.0)
    gain_position: float = Field(1.0, ge=0.0)
    gain_rotation: float = Field(1.0, ge=0.0)
    ema_a: float = Field(0.3, gt=0.0, le=1.0)
    kp_pos: float = Field(5.0, ge=0.0)
    kp_rot: float = Field(5.0, ge=0.0)
    kd_pos: float = Field(0.0, ge=0.0)
    kd_rot: float = Field(0.0, ge=0.0)
    residual_application: Literal["live", "integrated"] = "live"
    offset_decay: float = Field(0.0, ge=0.0, le=1.0)
    dropout_ticks: int = Field(3, ge=1)
    base_from_device_rotvec: Vector3 = [0.0, 0.0, 0.0]

    @property
    def window_period(self) -> float:
        """Finite difference span `ΔT = k * tick_period` (s)"""
        return round(self.window_ticks * self.tick_period, 12)
