"""
Numerical self-checks: analytic cost gradient against central finite
differences, and the retargeting solver against a brute-force grid on a
two joint model.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation as ScipyRotation

from dexassist._logger import get_logger
from dexassist.keyvec import KeyVectors
from dexassist.keyvec import robot_keyvectors
from dexassist.models.basemodel import BaseModel
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.solverconfig import SolverConfig
from dexassist.retarget.costs import AnchorState
from dexassist.retarget.costs import cost_targets
from dexassist.retarget.costs import evaluate
from dexassist.retarget.gates import huber
from dexassist.retarget.relative import solve_step

logger = get_logger(__name__)


# --------------------------------------------------------------------------- #
# Gradient                                                                    #
# --------------------------------------------------------------------------- #


class GradientCheckResult(BaseModel):
    """
    Attributes
    ----------
    passed:
        `True` if every sample is within tolerance
    worst_error:
        Largest relative error `‖g - g_fd‖ / max(‖g_fd‖, floor)`
    n_samples:
        Number of checked states
    n_resampled:
        Number of states rejected for lying near a hinge or Huber knee
    tolerance:
        Relative error tolerance
    """

    passed: bool
    worst_error: float
    n_samples: int
    n_resampled: int
    tolerance: float


def _inner_uniform(rng, model: HandModel, margin: float = 0.1) -> np.ndarray:
    lo = model.lower_limits
    hi = model.upper_limits
    span = hi - lo
    return rng.uniform(lo + margin * span, hi - margin * span)


def _near_knee(model, q, q_prev, targets, w: CostWeights, margin: float) -> bool:
    kin = model.kinematics(q, jacobians=False)
    x = [np.linalg.norm(kin.tips - targets.shape, axis=1)]
    f = targets.fingers
    if len(f) > 0:
        x += [np.linalg.norm((kin.tips[f] - kin.tips[0]) - targets.grasp, axis=1)]
    x += [np.atleast_1d(np.linalg.norm(q - q_prev))]
    x = np.concatenate(x)
    if (np.abs(x - w.huber_delta) < margin).any():
        return True
    d = model.pair_distances(kin.sphere_centers)
    return bool((np.abs(d - w.d_safe) < margin).any())


def finite_difference_gradient(fun, q: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function"""
    g = np.zeros_like(q)
    for i in range(q.shape[0]):
        e = np.zeros_like(q)
        e[i] = h
        g[i] = (fun(q + e) - fun(q - e)) / (2.0 * h)
    return g


def check_gradients(
    model: HandModel = None,
    weights: CostWeights = None,
    samples: int = 100,
    seed: int = 0,
    h: float = 1e-6,
    tol: float = 1e-4,
    knee_margin: float = 1e-4,
    floor: float = 1e-6,
) -> GradientCheckResult:
    """
    Compare the analytic gradient of the relative retargeting cost with
    central finite differences at random (q, anchor, human) states. States
    close to a Huber or hinge knee are resampled.

    Parameters
    ----------
    model:
        Hand model. `hand21` if `None`.
    weights:
        Cost weights
    samples:
        Number of checked states
    seed:
        Sampling seed
    h:
        Finite difference step (rad)
    tol:
        Relative error tolerance
    knee_margin:
        Minimum distance of every residual norm to its knee (m)
    floor:
        Lower bound of the relative error denominator

    Returns
    -------
    :
        Check result
    """
    if model is None:
        model = HandModel.load("hand21")
    if weights is None:
        weights = CostWeights()
    rng = np.random.default_rng(seed)

    worst = 0.0
    n_resampled = 0
    n_done = 0
    while n_done < samples:
        q_anchor = _inner_uniform(rng, model)
        q_human = _inner_uniform(rng, model)
        q_human_now = model.project_limits(
            q_human + rng.normal(0.0, 0.1, size=model.dof)
        )
        human_anchor = robot_keyvectors(model, q_human)
        human_now = robot_keyvectors(model, q_human_now)
        anchor = AnchorState.capture(model, q_anchor, human_anchor)
        q_prev = model.project_limits(q_anchor + rng.normal(0.0, 0.05, model.dof))
        q = model.project_limits(q_anchor + rng.normal(0.0, 0.2, model.dof))

        targets = cost_targets(human_now, weights, anchor=anchor)
        if _near_knee(model, q, q_prev, targets, weights, knee_margin):
            n_resampled += 1
            continue

        def fun(x):
            terms, _ = evaluate(model, x, q_prev, targets, weights, gradient=False)
            return terms.total

        _, g = evaluate(model, q, q_prev, targets, weights)
        g_fd = finite_difference_gradient(fun, q, h)
        err = float(np.linalg.norm(g - g_fd) / max(np.linalg.norm(g_fd), floor))
        worst = max(worst, err)
        n_done += 1

    result = GradientCheckResult(
        passed=bool(worst <= tol),
        worst_error=worst,
        n_samples=n_done,
        n_resampled=n_resampled,
        tolerance=tol,
    )
    logger.info(
        f"Gradient check on {n_done} states ({n_resampled} resampled): worst "
        f"relative error {worst:.3e} ({'pass' if result.passed else 'FAIL'})"
    )
    return result


# --------------------------------------------------------------------------- #
# Brute-force oracle                                                          #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class OracleInstance:
    """
    Attributes
    ----------
    q_anchor:
        Anchor configuration, also the warm start (rad)
    human_anchor:
        Human key vectors at the anchor
    human_now:
        Current human key vectors
    """

    q_anchor: np.ndarray
    human_anchor: KeyVectors
    human_now: KeyVectors


class OracleCheckResult(BaseModel):
    """
    Attributes
    ----------
    passed:
        `True` if the solver cost never exceeds the grid minimum by more than
        the tolerance
    worst_gap:
        Largest `solver cost - grid minimum`
    n_instances:
        Number of checked instances
    tolerance:
        Cost tolerance
    """

    passed: bool
    worst_gap: float
    n_instances: int
    tolerance: float


def batch_fingertips(model: HandModel, qs) -> np.ndarray:
    """
    Fingertips of many configurations at once.

    Parameters
    ----------
    model:
        Hand model
    qs:
        Configurations, shape (n, dof) (rad)

    Returns
    -------
    :
        Array of shape (n, n_chains, 3)
    """
    qs = np.atleast_2d(np.asarray(qs, dtype=float))
    n = qs.shape[0]
    out = np.empty((n, model.n_chains, 3))
    palm = model.palm.to_pose()
    for c, (chain, sl) in enumerate(zip(model.chains, model.chain_slices)):
        base = palm.compose(chain.base.to_pose())
        r = np.broadcast_to(base.rotation.matrix, (n, 3, 3))
        p = np.broadcast_to(base.position, (n, 3))
        for j, joint in enumerate(chain.joints):
            p = p + r @ np.array(joint.offset, dtype=float)
            axis = np.array(joint.axis, dtype=float) / np.linalg.norm(joint.axis)
            rj = ScipyRotation.from_rotvec(qs[:, sl.start + j, None] * axis)
            r = r @ rj.as_matrix()
        out[:, c] = p + r @ np.array(chain.tip_offset, dtype=float)
    return out


def oracle_instances(
    model: HandModel = None, n: int = 20, seed: int = 0
) -> list[OracleInstance]:
    """
    Fixture instances on the planar two joint finger: bent anchor
    configurations and human fingertip changes of at most 1 cm in the plane.
    """
    if model is None:
        model = HandModel.load("finger2")
    rng = np.random.default_rng(seed)
    instances = []
    for _ in range(n):
        q_anchor = np.array([rng.uniform(-0.3, 0.3), rng.uniform(0.3, 0.8)])
        q_human = np.array([rng.uniform(-0.3, 0.3), rng.uniform(0.3, 0.8)])
        human_anchor = robot_keyvectors(model, q_human)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        norm = rng.uniform(0.002, 0.01)
        delta = norm * np.array([np.cos(angle), np.sin(angle), 0.0])
        human_now = KeyVectors.from_wrist_to_tip(
            human_anchor.wrist_to_tip + delta[None, :]
        )
        instances += [
            OracleInstance(
                q_anchor=q_anchor, human_anchor=human_anchor, human_now=human_now
            )
        ]
    return instances


def grid_minimum(
    model: HandModel,
    anchor: AnchorState,
    human_now: KeyVectors,
    q_prev,
    weights: CostWeights,
    resolution: float = 1e-3,
    window: float = 0.5,
) -> tuple[float, np.ndarray]:
    """
    Minimum of the relative cost over a regular grid centered on `q_prev`,
    within joint limits. Two joint models without collision pairs only.
    """
    if model.dof != 2 or len(model.pair_array) > 0:
        raise ValueError(
            "Grid minimum requires a two joint model without collision pairs."
        )
    targets = cost_targets(human_now, weights, anchor=anchor)
    q_prev = np.asarray(q_prev, dtype=float)
    axes = []
    for i in range(2):
        a = q_prev[i] + np.arange(-window, window + 0.5 * resolution, resolution)
        axes += [a[(a >= model.lower_limits[i]) & (a <= model.upper_limits[i])]]

    best = np.inf
    best_q = None
    f = targets.fingers
    for start in range(0, len(axes[0]), 100):
        g0, g1 = np.meshgrid(axes[0][start : start + 100], axes[1], indexing="ij")
        qs = np.stack([g0.ravel(), g1.ravel()], axis=1)
        tips = batch_fingertips(model, qs)

        x = np.linalg.norm(tips - targets.shape[None], axis=2)
        cost = (targets.beta[None] * huber(x, weights.huber_delta)).sum(axis=1)
        if len(f) > 0:
            r = (tips[:, f] - tips[:, :1]) - targets.grasp[None]
            x = np.linalg.norm(r, axis=2)
            cost += (targets.omega[None] * huber(x, weights.huber_delta)).sum(axis=1)
        x = np.linalg.norm(qs - q_prev[None], axis=1)
        cost += weights.lambda_reg * huber(x, weights.huber_delta)

        i = int(np.argmin(cost))
        if cost[i] < best:
            best = float(cost[i])
            best_q = qs[i].copy()
    return best, best_q


def check_oracle(
    instances: list[OracleInstance] = None,
    model: HandModel = None,
    weights: CostWeights = None,
    solver: SolverConfig = None,
    resolution: float = 1e-3,
    window: float = 0.5,
    tol: float = 1e-5,
) -> OracleCheckResult:
    """
    Compare relative retargeting solves with brute-force grid minima.

    Parameters
    ----------
    instances:
        Fixture instances. `oracle_instances()` if `None`.
    model:
        Two joint hand model. `finger2` if `None`.
    weights:
        Cost weights
    solver:
        Solver settings
    resolution:
        Grid resolution (rad)
    window:
        Grid half width around the warm start (rad)
    tol:
        Cost tolerance

    Returns
    -------
    :
        Check result
    """
    if model is None:
        model = HandModel.load("finger2")
    if weights is None:
        weights = CostWeights()
    if instances is None:
        instances = oracle_instances(model)

    worst = -np.inf
    for k, inst in enumerate(instances):
        anchor = AnchorState.capture(model, inst.q_anchor, inst.human_anchor)
        report = solve_step(
            model, anchor, inst.human_now, inst.q_anchor, weights, solver
        )
        grid, _ = grid_minimum(
            model, anchor, inst.human_now, inst.q_anchor, weights, resolution, window
        )
        gap = report.cost - grid
        logger.debug(f"Oracle instance {k}: solver {report.cost:.6e}, grid {grid:.6e}")
        worst = max(worst, gap)

    result = OracleCheckResult(
        passed=bool(worst <= tol),
        worst_gap=float(worst),
        n_instances=len(instances),
        tolerance=tol,
    )
    logger.info(
        f"Oracle check on {len(instances)} instances: worst gap {worst:.3e} "
        f"({'pass' if result.passed else 'FAIL'})"
    )
    return result
