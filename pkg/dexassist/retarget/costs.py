"""
Retargeting cost: shaping, precision grasp, structural safety and temporal
regularization terms, with their analytic gradient.

The cost has a relative form, tracking key vector changes since an anchor,
and an absolute form, tracking the normalized human key vectors directly.
Both share `evaluate`; only the targets differ.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from dexassist._logger import get_logger
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import InvalidFingerError
from dexassist.keyvec import KeyVectors
from dexassist.keyvec import relative_deltas
from dexassist.keyvec import robot_keyvectors
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.retarget.gates import gate_alpha
from dexassist.retarget.gates import gate_beta
from dexassist.retarget.gates import gate_omega
from dexassist.retarget.gates import huber
from dexassist.retarget.gates import huber_weight

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AnchorState:
    """
    Robot and human state frozen at intervention onset.

    Attributes
    ----------
    q_anchor:
        Robot hand command at onset (rad)
    robot_kv_anchor:
        Robot key vectors at `q_anchor`
    human_kv_anchor:
        Normalized human key vectors at onset
    """

    q_anchor: np.ndarray
    robot_kv_anchor: KeyVectors
    human_kv_anchor: KeyVectors

    @classmethod
    def capture(cls, model: HandModel, q, human_kv: KeyVectors) -> "AnchorState":
        q = model.check_config(q).copy()
        robot_kv = robot_keyvectors(model, q)
        if robot_kv.wrist_to_tip.shape != human_kv.wrist_to_tip.shape:
            raise DimensionMismatchError(
                name="human_kv",
                expected=robot_kv.wrist_to_tip.shape,
                got=human_kv.wrist_to_tip.shape,
            )
        return cls(q_anchor=q, robot_kv_anchor=robot_kv, human_kv_anchor=human_kv)


class CostTerms(NamedTuple):
    shape: float
    grasp: float
    safe: float
    reg: float
    total: float


@dataclass(frozen=True, eq=False)
class CostTargets:
    """
    Per-step quantities that are constant in `q`: tracked key vectors and
    gate values computed from the human hand.

    Attributes
    ----------
    shape:
        Tracked wrist-to-tip vectors, shape (n_chains, 3)
    grasp:
        Tracked opposition vectors `alpha_j * u_tgt_j`, one row per
        opposition finger
    fingers:
        Opposition finger indices
    beta:
        Shaping gate per chain
    omega:
        Grasp weight per opposition finger
    alpha:
        Pinch activation per opposition finger
    """

    shape: np.ndarray
    grasp: np.ndarray
    fingers: np.ndarray
    beta: np.ndarray
    omega: np.ndarray
    alpha: np.ndarray


def cost_targets(
    human_now: KeyVectors, w: CostWeights, anchor: AnchorState = None
) -> CostTargets:
    """
    Build the tracked targets and gates of one control step.

    Parameters
    ----------
    human_now:
        Normalized human key vectors at the current step
    w:
        Cost weights
    anchor:
        Intervention anchor. If `None`, the absolute form is built.

    Returns
    -------
    :
        Cost targets
    """
    n = human_now.n_fingers
    fingers = np.array(w.resolve_opposition_fingers(n), dtype=int)
    for j in fingers:
        if not 1 <= j < n:
            raise InvalidFingerError(int(j), n)

    if anchor is None:
        shape = human_now.wrist_to_tip
        u_tgt = human_now.opposition
    else:
        deltas = relative_deltas(human_now, anchor.human_kv_anchor)
        shape = anchor.robot_kv_anchor.wrist_to_tip + deltas.wrist_to_tip
        u_tgt = anchor.robot_kv_anchor.opposition + deltas.opposition

    d_all = np.linalg.norm(human_now.opposition, axis=1)
    beta = np.ones(n)
    beta[1:] = gate_beta(d_all, w)
    d = d_all[fingers - 1]
    if len(fingers) > 0:
        beta[0] = gate_beta(d.min(), w)

    alpha = gate_alpha(d, w)
    return CostTargets(
        shape=shape,
        grasp=alpha[:, None] * u_tgt[fingers - 1],
        fingers=fingers,
        beta=beta,
        omega=gate_omega(d, w),
        alpha=alpha,
    )


def evaluate(
    model: HandModel,
    q,
    q_prev,
    targets: CostTargets,
    w: CostWeights,
    gradient: bool = True,
) -> tuple[CostTerms, np.ndarray]:
    """
    Evaluate the cost terms and, optionally, the gradient of the total.

    Parameters
    ----------
    model:
        Hand model
    q:
        Candidate configuration (rad)
    q_prev:
        Previous command (rad)
    targets:
        Step targets
    w:
        Cost weights
    gradient:
        If `False`, the returned gradient is `None`

    Returns
    -------
    :
        Cost terms and gradient
    """
    q = model.check_config(q)
    q_prev = model.check_config(q_prev)
    if targets.shape.shape != (model.n_chains, 3):
        raise DimensionMismatchError(
            name="targets", expected=(model.n_chains, 3), got=targets.shape.shape
        )

    kin = model.kinematics(q, jacobians=gradient)
    tips = kin.tips
    f = targets.fingers

    r_shape = tips - targets.shape
    x_shape = np.linalg.norm(r_shape, axis=1)
    l_shape = float(np.sum(targets.beta * huber(x_shape, w.huber_delta)))

    r_grasp = (tips[f] - tips[0]) - targets.grasp
    x_grasp = np.linalg.norm(r_grasp, axis=1)
    l_grasp = float(np.sum(targets.omega * huber(x_grasp, w.huber_delta)))

    distances = model.pair_distances(kin.sphere_centers)
    hinge = np.maximum(0.0, w.d_safe - distances)
    l_safe = float(w.gamma * np.sum(hinge * hinge))

    e_reg = q - q_prev
    x_reg = float(np.linalg.norm(e_reg))
    l_reg = float(w.lambda_reg * huber(x_reg, w.huber_delta))

    terms = CostTerms(
        shape=l_shape,
        grasp=l_grasp,
        safe=l_safe,
        reg=l_reg,
        total=l_shape + l_grasp + l_safe + l_reg,
    )
    if not gradient:
        return terms, None

    jac = kin.tip_jacobians
    coef = (targets.beta * huber_weight(x_shape, w.huber_delta))[:, None] * r_shape
    grad = np.einsum("ik,ikn->n", coef, jac)

    if len(f) > 0:
        coef = (targets.omega * huber_weight(x_grasp, w.huber_delta))[:, None] * r_grasp
        grad += np.einsum("jk,jkn->n", coef, jac[f] - jac[0][None])

    active = hinge > 0.0
    if active.any():
        pairs = model.pair_array[active]
        diff = kin.sphere_centers[pairs[:, 0]] - kin.sphere_centers[pairs[:, 1]]
        dist = np.linalg.norm(diff, axis=1)
        e_hat = np.divide(
            diff, dist[:, None], out=np.zeros_like(diff), where=dist[:, None] > 0
        )
        sj = kin.sphere_jacobians
        d_dist = np.einsum("pk,pkn->pn", e_hat, sj[pairs[:, 0]] - sj[pairs[:, 1]])
        grad += -2.0 * w.gamma * (hinge[active] @ d_dist)

    grad += w.lambda_reg * float(huber_weight(x_reg, w.huber_delta)) * e_reg
    return terms, grad


def cost_terms(
    model: HandModel,
    q,
    q_prev,
    anchor: AnchorState,
    human_now: KeyVectors,
    w: CostWeights,
) -> CostTerms:
    """
    Relative retargeting cost terms.

    Parameters
    ----------
    model:
        Hand model
    q:
        Candidate configuration (rad)
    q_prev:
        Previous command (rad)
    anchor:
        Intervention anchor
    human_now:
        Normalized human key vectors at the current step
    w:
        Cost weights

    Returns
    -------
    :
        (shape, grasp, safe, reg, total)
    """
    targets = cost_targets(human_now, w, anchor=anchor)
    terms, _ = evaluate(model, q, q_prev, targets, w, gradient=False)
    return terms


def cost_gradient(
    model: HandModel,
    q,
    q_prev,
    anchor: AnchorState,
    human_now: KeyVectors,
    w: CostWeights,
) -> np.ndarray:
    """Gradient of the relative retargeting total cost with respect to `q`"""
    targets = cost_targets(human_now, w, anchor=anchor)
    _, grad = evaluate(model, q, q_prev, targets, w, gradient=True)
    return grad
