from pathlib import Path
from typing import Any
from typing import Union

from pydantic import Field
from pydantic import PrivateAttr
from pydantic import model_validator

from dexassist._logger import get_logger
from dexassist.models.armshareconfig import ArmShareConfig
from dexassist.models.basemodel import BaseModel
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.interventionmode import InterventionConfig
from dexassist.models.solverconfig import BaselineConfig
from dexassist.models.solverconfig import SolverConfig

logger = get_logger(__name__)

CONFIGS_DIRPATH = Path(__file__).parent.parent / "resources" / "configs"


class RolloutConfig(BaseModel):
    """
    Closed-loop replay settings.

    Attributes
    ----------
    control_period:
        Control period (s)
    vr_tick:
        VR sampling period (s)
    horizon:
        Policy action chunk length `H`
    observation_prefix:
        Prefix of the observation snapshot ids written to correction logs
    """

    control_period: float = Field(0.02, gt=0.0)
    vr_tick: float = Field(0.02, gt=0.0)
    horizon: int = Field(8, ge=1)
    observation_prefix: str = "obs"


class SimConfig(BaseModel):
    """
    Simulation configuration covering every module. The arm sharing control
    and VR periods follow the rollout section unless set explicitly, in which
    case they must agree.

    Attributes
    ----------
    hand_model:
        Bundled model name, model file path or inline model
    weights:
        Retargeting cost weights
    solver:
        Retargeting solver settings
    baselines:
        Baseline retargeters settings
    armshare:
        Shared arm control settings
    intervention:
        Intervention settings
    rollout:
        Replay settings

    Examples
    --------
    ```py
    from dexassist.models import SimConfig

    config = SimConfig.load()
    print(config.armshare.window_period)
    # > 0.04
    ```
    """

    hand_model: Union[str, HandModel] = "hand21"
    weights: CostWeights = CostWeights()
    solver: SolverConfig = SolverConfig()
    baselines: BaselineConfig = BaselineConfig()
    armshare: ArmShareConfig = ArmShareConfig()
    intervention: InterventionConfig = InterventionConfig()
    rollout: RolloutConfig = RolloutConfig()
    _model: HandModel = PrivateAttr(default=None)

    @model_validator(mode="before")
    @classmethod
    def sync_periods(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        rollout = data.get("rollout")
        armshare = data.get("armshare")
        if not isinstance(rollout, dict):
            return data
        if armshare is None:
            armshare = {}
        if not isinstance(armshare, dict):
            return data
        data = dict(data)
        armshare = dict(armshare)
        if "control_period" in rollout:
            armshare.setdefault("control_period", rollout["control_period"])
        if "vr_tick" in rollout:
            armshare.setdefault("tick_period", rollout["vr_tick"])
        data["armshare"] = armshare
        return data

    @model_validator(mode="after")
    def check_periods(self) -> Any:
        if self.armshare.control_period != self.rollout.control_period:
            raise ValueError(
                f"`armshare.control_period` ({self.armshare.control_period}) "
                f"differs from `rollout.control_period` "
                f"({self.rollout.control_period})."
            )
        if self.armshare.tick_period != self.rollout.vr_tick:
            raise ValueError(
                f"`armshare.tick_period` ({self.armshare.tick_period}) differs "
                f"from `rollout.vr_tick` ({self.rollout.vr_tick})."
            )
        return self

    @classmethod
    def load(cls, path: Union[str, Path] = None) -> "SimConfig":
        """
        Load a configuration file. The bundled default if `path` is `None`.
        """
        if path is None:
            path = CONFIGS_DIRPATH / "default.yaml"
        logger.info(f"Reading configuration from {path}")
        with open(path, "r") as fp:
            return cls.model_validate_yaml(fp)

    @property
    def model(self) -> HandModel:
        """Resolved hand model"""
        if self._model is None:
            if isinstance(self.hand_model, HandModel):
                self._model = self.hand_model
            else:
                self._model = HandModel.load(self.hand_model)
        return self._model
