from dexassist.sim.checks import GradientCheckResult
from dexassist.sim.checks import OracleCheckResult
from dexassist.sim.checks import OracleInstance
from dexassist.sim.checks import batch_fingertips
from dexassist.sim.checks import check_gradients
from dexassist.sim.checks import check_oracle
from dexassist.sim.checks import finite_difference_gradient
from dexassist.sim.checks import grid_minimum
from dexassist.sim.checks import oracle_instances
from dexassist.sim.policy import MockPolicyStream
from dexassist.sim.policy import default_grasp
from dexassist.sim.report import metrics_frame
from dexassist.sim.report import read_report
from dexassist.sim.report import write_report
from dexassist.sim.rollout import ReplayResult
from dexassist.sim.rollout import RolloutResult
from dexassist.sim.rollout import replay_correction_log
from dexassist.sim.rollout import run_rollout
from dexassist.sim.scenario import Scenario
from dexassist.sim.scenario import generate_scenario
from dexassist.sim.sweep import run_sweep
from dexassist.sim.sweep import summarize_method
