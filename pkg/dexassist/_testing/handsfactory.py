from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.scenariospec import ScenarioSpec
from dexassist.models.simconfig import SimConfig


class HandsFactory:
    """Lazily loaded bundled models, configuration and scenarios shared by tests"""

    def __init__(self):
        self._hand21 = None
        self._finger2 = None
        self._config = None
        self._scenarios = {}

    @property
    def hand21(self) -> HandModel:
        if self._hand21 is None:
            self._hand21 = HandModel.load("hand21")
        return self._hand21

    @property
    def finger2(self) -> HandModel:
        if self._finger2 is None:
            self._finger2 = HandModel.load("finger2")
        return self._finger2

    @property
    def config(self) -> SimConfig:
        if self._config is None:
            self._config = SimConfig.load()
        return self._config

    @property
    def weights(self) -> CostWeights:
        return self.config.weights

    def scenario(self, name: str) -> ScenarioSpec:
        if name not in self._scenarios:
            self._scenarios[name] = ScenarioSpec.load(name)
        return self._scenarios[name]

    def short_scenario(self, name: str, **kwargs) -> ScenarioSpec:
        """Bundled scenario with some fields overridden"""
        return self.scenario(name).model_copy(update=kwargs)
