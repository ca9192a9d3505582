from dexassist.retarget.baselines import TeleopBackend
from dexassist.retarget.baselines import absolute_retarget
from dexassist.retarget.baselines import damped_pinv
from dexassist.retarget.baselines import delta_cmd_retarget
from dexassist.retarget.baselines import jacobian_retarget
from dexassist.retarget.costs import AnchorState
from dexassist.retarget.costs import CostTargets
from dexassist.retarget.costs import CostTerms
from dexassist.retarget.costs import cost_gradient
from dexassist.retarget.costs import cost_targets
from dexassist.retarget.costs import cost_terms
from dexassist.retarget.costs import evaluate
from dexassist.retarget.gates import gate_alpha
from dexassist.retarget.gates import gate_beta
from dexassist.retarget.gates import gate_omega
from dexassist.retarget.gates import huber
from dexassist.retarget.gates import smoothstep
from dexassist.retarget.relative import absolute_solve
from dexassist.retarget.relative import solve_step
from dexassist.retarget.solver import SolveReport
from dexassist.retarget.solver import SolverWorkspace
from dexassist.retarget.solver import minimize_box
