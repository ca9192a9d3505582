from .armshareconfig import ArmShareConfig
from .basemodel import BaseModel
from .costweights import CostWeights
from .handmodel import Chain
from .handmodel import FramePose
from .handmodel import HandKinematics
from .handmodel import HandModel
from .handmodel import Joint
from .handmodel import ProximityPair
from .handmodel import Sphere
from .interventionmode import InterventionConfig
from .interventionmode import InterventionMode
from .records import ArmCommandRecord
from .records import CommandRecord
from .records import CorrectionLogFooter
from .records import CorrectionLogHeader
from .records import CorrectionRecord
from .records import HumanSummary
from .reports import DiscontinuityReport
from .reports import MethodSummary
from .reports import MetricsReport
from .reports import SweepReport
from .reports import mean_confidence_interval
from .scenariospec import FingerCurve
from .scenariospec import HumanStreamSpec
from .scenariospec import PinchSpec
from .scenariospec import PolicyStreamSpec
from .scenariospec import ScenarioSpec
from .scenariospec import ToggleSpec
from .scenariospec import WristMotionSpec
from .simconfig import RolloutConfig
from .simconfig import SimConfig
from .solverconfig import BaselineConfig
from .solverconfig import SolverConfig
