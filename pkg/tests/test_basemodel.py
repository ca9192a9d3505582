import io

import numpy as np
import pytest
import yaml

from dexassist._testing import Paths
from dexassist.models import BaseModel
from dexassist.models import CostWeights
from dexassist.models import HandModel
from dexassist.models import SimConfig

paths = Paths(__file__)


def test_read_yaml():
    with open(paths.yaml / "hand.yaml", "r") as fp:
        model = HandModel.model_validate_yaml(fp)

    assert model.name == "mini"
    assert model.dof == 3
    assert model.n_chains == 1
    assert model.joint_kinds == ["abduction", "flexion", "flexion"]
    assert np.allclose(model.upper_limits, np.radians([20.0, 90.0, 100.0]))


def test_read_yaml_stream():
    class Gains(BaseModel):
        kp: float = None
        limits: list[float] = None

    fp = io.StringIO("kp: 2.0\nlimits: !deg [0, 180]\n")
    gains = Gains.model_validate_yaml(fp)
    assert gains.kp == 2.0
    assert gains.limits == pytest.approx([0.0, np.pi])


def test_dump_yaml():
    w = CostWeights(gamma=200.0)
    dump = w.model_dump_yaml(exclude_unset=True)
    assert dump == "gamma: 200.0\n"

    data = yaml.safe_load(CostWeights().model_dump_yaml())
    assert data["d_safe"] == 0.01
    assert CostWeights.model_validate(data) == CostWeights()


def test_forbid_extra():
    with pytest.raises(ValueError):
        CostWeights(gama=200.0)

    w = CostWeights()
    with pytest.raises(ValueError):
        w.gamma = -1.0


def test_config_roundtrip():
    config = SimConfig.load()
    restored = SimConfig.model_validate(config.model_dump(mode="json"))
    assert restored == config
    assert restored.armshare.control_period == restored.rollout.control_period

    with pytest.raises(ValueError):
        SimConfig(
            rollout={"control_period": 0.01},
            armshare={"control_period": 0.02},
        )


if __name__ == "__main__":
    test_read_yaml()
    test_read_yaml_stream()
    test_dump_yaml()
    test_forbid_extra()
    test_config_roundtrip()
