from dexassist._logger import get_logger
from dexassist.keyvec import KeyVectors
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.solverconfig import SolverConfig
from dexassist.retarget.costs import AnchorState
from dexassist.retarget.costs import cost_targets
from dexassist.retarget.costs import evaluate
from dexassist.retarget.solver import SolveReport
from dexassist.retarget.solver import SolverWorkspace
from dexassist.retarget.solver import minimize_box

logger = get_logger(__name__)


def _solve(
    model: HandModel,
    targets,
    q_prev,
    w: CostWeights,
    cfg: SolverConfig,
    workspace: SolverWorkspace,
) -> SolveReport:
    q_prev = model.check_config(q_prev)

    def fun(q):
        terms, grad = evaluate(model, q, q_prev, targets, w)
        return terms.total, grad

    report = minimize_box(
        fun,
        x0=q_prev,
        lower=model.lower_limits,
        upper=model.upper_limits,
        cfg=cfg,
        workspace=workspace,
    )
    if not report.converged:
        logger.debug(
            f"Retargeting stopped after {report.iterations} iterations "
            f"(projected gradient {report.gradient_norm:.3e})"
        )
    return report


def solve_step(
    model: HandModel,
    anchor: AnchorState,
    human_now: KeyVectors,
    q_prev,
    w: CostWeights = None,
    cfg: SolverConfig = None,
    workspace: SolverWorkspace = None,
) -> SolveReport:
    """
    Relative retargeting of one control step: minimize the anchored cost
    from the warm start `q_prev`, within joint limits.

    With a still human (`human_now` equal to the anchor human key vectors),
    open pinch gates and an inactive safety term, the anchor configuration
    is the global minimum and is returned as is.

    Parameters
    ----------
    model:
        Hand model
    anchor:
        Intervention anchor
    human_now:
        Normalized human key vectors at the current step
    q_prev:
        Previous hand command, used as warm start and regularization target
    w:
        Cost weights
    cfg:
        Solver settings
    workspace:
        Caller-owned scratch

    Returns
    -------
    :
        Solve report

    Examples
    --------
    ```py
    import numpy as np

    from dexassist.keyvec import robot_keyvectors
    from dexassist.models import HandModel
    from dexassist.retarget import AnchorState
    from dexassist.retarget import solve_step

    model = HandModel.load("hand21")
    q0 = model.reference_open_config()
    human = robot_keyvectors(model, q0)
    anchor = AnchorState.capture(model, q0, human)
    report = solve_step(model, anchor, human, q0)
    print(np.abs(report.q_solution - q0).max())
    # > 0.0
    ```
    """
    if w is None:
        w = CostWeights()
    targets = cost_targets(human_now, w, anchor=anchor)
    return _solve(model, targets, q_prev, w, cfg, workspace)


def absolute_solve(
    model: HandModel,
    human_now: KeyVectors,
    q_prev,
    w: CostWeights = None,
    cfg: SolverConfig = None,
    workspace: SolverWorkspace = None,
) -> SolveReport:
    """
    Absolute form of the retargeting solve: robot key vectors track the
    normalized human key vectors directly. Safety and regularization are
    unchanged.
    """
    if w is None:
        w = CostWeights()
    targets = cost_targets(human_now, w, anchor=None)
    return _solve(model, targets, q_prev, w, cfg, workspace)
