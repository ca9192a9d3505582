"""
Comparison retargeters: absolute teleoperation, relative command deltas on
top of an absolute backend (DeltaCmd), and per-finger Jacobian mapping.
"""

import numpy as np
from scipy import linalg

from dexassist._logger import get_logger
from dexassist.exceptions import DimensionMismatchError
from dexassist.keyvec import KeyVectors
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.solverconfig import BaselineConfig
from dexassist.models.solverconfig import SolverConfig
from dexassist.retarget.relative import absolute_solve
from dexassist.retarget.solver import SolverWorkspace

logger = get_logger(__name__)


def absolute_retarget(
    model: HandModel,
    human_now: KeyVectors,
    q_prev,
    w: CostWeights = None,
    cfg: SolverConfig = None,
    workspace: SolverWorkspace = None,
) -> np.ndarray:
    """
    Absolute teleoperation retargeting: the robot wrist-to-tip vectors track
    the normalized human ones directly.

    Parameters
    ----------
    model:
        Hand model
    human_now:
        Normalized human key vectors
    q_prev:
        Previous backend output (warm start)
    w:
        Cost weights
    cfg:
        Solver settings
    workspace:
        Caller-owned scratch

    Returns
    -------
    :
        Joint vector (rad)
    """
    return absolute_solve(model, human_now, q_prev, w, cfg, workspace).q_solution


def delta_cmd_retarget(
    q_robot_anchor, q_tel_now, q_tel_anchor, model: HandModel = None
) -> np.ndarray:
    """
    Robot anchor plus the change of the teleoperation backend command since
    the anchor: `q_robot_anchor + (q_tel_now - q_tel_anchor)`.

    Parameters
    ----------
    q_robot_anchor:
        Robot hand command at intervention onset
    q_tel_now:
        Current teleoperation backend command
    q_tel_anchor:
        Teleoperation backend command at intervention onset
    model:
        If set, the result is projected to the model joint limits

    Returns
    -------
    :
        Joint vector (rad)
    """
    q_robot_anchor = np.asarray(q_robot_anchor, dtype=float)
    q_tel_now = np.asarray(q_tel_now, dtype=float)
    q_tel_anchor = np.asarray(q_tel_anchor, dtype=float)
    for name, v in (("q_tel_now", q_tel_now), ("q_tel_anchor", q_tel_anchor)):
        if v.shape != q_robot_anchor.shape:
            raise DimensionMismatchError(
                name=name, expected=q_robot_anchor.shape, got=v.shape
            )

    q = q_robot_anchor + (q_tel_now - q_tel_anchor)
    if model is not None:
        q = model.project_limits(q)
    return q


def damped_pinv(jac: np.ndarray, damping: float) -> np.ndarray:
    """Damped least squares inverse `Jᵀ (J Jᵀ + λ² I)⁻¹`"""
    m = jac.shape[0]
    gram = jac @ jac.T + damping**2 * np.eye(m)
    return linalg.solve(gram, jac, assume_a="pos").T


def jacobian_retarget(
    model: HandModel,
    q_prev,
    fingertip_displacements,
    damping: float = None,
) -> np.ndarray:
    """
    Jacobian mapping: per finger, joint increments are the damped least
    squares solution for the requested fingertip displacement. Joints of
    other chains never move.

    Parameters
    ----------
    model:
        Hand model
    q_prev:
        Current command (rad)
    fingertip_displacements:
        Requested displacement per fingertip, shape (n_chains, 3) (m)
    damping:
        Damping factor `λ` (m). Defaults to `BaselineConfig().damping`.

    Returns
    -------
    :
        Joint vector (rad), projected to limits
    """
    if damping is None:
        damping = BaselineConfig().damping
    q_prev = model.check_config(q_prev)
    dx = np.asarray(fingertip_displacements, dtype=float)
    if dx.shape != (model.n_chains, 3):
        raise DimensionMismatchError(
            name="fingertip_displacements", expected=(model.n_chains, 3), got=dx.shape
        )

    jac = model.kinematics(q_prev).tip_jacobians
    dq = np.zeros(model.dof)
    for c, sl in enumerate(model.chain_slices):
        if not dx[c].any():
            continue
        dq[sl] = damped_pinv(jac[c][:, sl], damping) @ dx[c]
    return model.project_limits(q_prev + dq)


class TeleopBackend:
    """
    Absolute teleoperation retargeter running on the human stream. It keeps
    its own warm start across steps and interventions and records its
    command at intervention onset for the DeltaCmd baseline.

    Parameters
    ----------
    model:
        Hand model
    weights:
        Cost weights
    solver:
        Solver settings
    q_init:
        Initial warm start. Reference open pose if `None`.
    """

    def __init__(
        self,
        model: HandModel,
        weights: CostWeights = None,
        solver: SolverConfig = None,
        q_init=None,
    ):
        self.model = model
        self.weights = weights or CostWeights()
        self.solver = solver or SolverConfig()
        self.workspace = SolverWorkspace()
        self.q = None
        self.q_anchor = None
        self.reset(q_init)

    def reset(self, q=None) -> None:
        if q is None:
            q = self.model.reference_open_config()
        self.q = self.model.project_limits(q)
        self.q_anchor = None

    def step(self, human_now: KeyVectors) -> np.ndarray:
        self.q = absolute_retarget(
            self.model,
            human_now,
            self.q,
            self.weights,
            self.solver,
            self.workspace,
        )
        return self.q.copy()

    def capture_anchor(self) -> np.ndarray:
        self.q_anchor = self.q.copy()
        return self.q_anchor.copy()
