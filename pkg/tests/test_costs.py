import numpy as np
import pytest

from dexassist._testing import hands
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import InvalidFingerError
from dexassist.keyvec import KeyVectors
from dexassist.keyvec import robot_keyvectors
from dexassist.models import CostWeights
from dexassist.retarget import AnchorState
from dexassist.retarget import cost_gradient
from dexassist.retarget import cost_targets
from dexassist.retarget import cost_terms
from dexassist.sim import default_grasp
from dexassist.sim import finite_difference_gradient

w = CostWeights()


def _pinched(kv: KeyVectors, finger: int, closure: float) -> KeyVectors:
    v = kv.wrist_to_tip.copy()
    mid = 0.5 * (v[0] + v[finger])
    v[0] += closure * (mid - v[0])
    v[finger] += closure * (mid - v[finger])
    return KeyVectors.from_wrist_to_tip(v)


def test_zero_at_anchor():
    model = hands.hand21
    q_anchor = default_grasp(model)
    human = robot_keyvectors(model, model.reference_open_config())
    anchor = AnchorState.capture(model, q_anchor, human)

    terms = cost_terms(model, q_anchor, q_anchor, anchor, human, w)
    assert terms.shape == 0.0
    assert terms.grasp == 0.0
    assert terms.safe == 0.0
    assert terms.reg == 0.0
    assert terms.total == 0.0
    assert (cost_gradient(model, q_anchor, q_anchor, anchor, human, w) == 0.0).all()


def test_gates_in_targets():
    model = hands.hand21
    human = robot_keyvectors(model, model.reference_open_config())

    # Open hand: full shaping, no grasp
    targets = cost_targets(human, w)
    assert np.allclose(targets.beta, 1.0)
    assert np.allclose(targets.omega, 0.0)
    assert np.allclose(targets.alpha, 1.0)
    assert np.allclose(targets.grasp, human.opposition)

    # Full pinch on the index finger
    pinched = _pinched(human, 1, 1.0)
    targets = cost_targets(pinched, w)
    assert targets.omega[0] == pytest.approx(w.omega_max)
    assert targets.alpha[0] == 0.0
    assert np.allclose(targets.grasp[0], 0.0)
    assert targets.beta[1] == pytest.approx(w.beta_min)
    assert targets.beta[0] == pytest.approx(w.beta_min)

    # Opposition subset
    targets = cost_targets(human, CostWeights(opposition_fingers=[2]))
    assert targets.fingers.tolist() == [2]
    assert targets.grasp.shape == (1, 3)

    with pytest.raises(InvalidFingerError):
        cost_targets(human, CostWeights(opposition_fingers=[7]))


def test_relative_targets():
    model = hands.hand21
    q_anchor = default_grasp(model)
    human_anchor = robot_keyvectors(model, model.reference_open_config())
    anchor = AnchorState.capture(model, q_anchor, human_anchor)

    delta = np.zeros((5, 3))
    delta[2] = [0.0, 0.0, -0.005]
    human_now = KeyVectors.from_wrist_to_tip(human_anchor.wrist_to_tip + delta)
    targets = cost_targets(human_now, w, anchor=anchor)
    assert np.allclose(
        targets.shape, anchor.robot_kv_anchor.wrist_to_tip + delta, atol=1e-15
    )

    with pytest.raises(DimensionMismatchError):
        AnchorState.capture(
            model, q_anchor, KeyVectors.from_wrist_to_tip(np.zeros((2, 3)))
        )


def test_safety_term():
    model = hands.hand21
    q_anchor = default_grasp(model)
    human = robot_keyvectors(model, model.reference_open_config())
    anchor = AnchorState.capture(model, q_anchor, human)

    # Large safety margin activates the hinge
    wide = CostWeights(d_safe=0.2)
    terms = cost_terms(model, q_anchor, q_anchor, anchor, human, wide)
    assert terms.safe > 0.0
    assert terms.total == pytest.approx(terms.safe)


def test_gradient():
    model = hands.hand21
    rng = np.random.default_rng(1)
    human_anchor = robot_keyvectors(model, model.reference_open_config())
    human_now = _pinched(human_anchor, 1, 0.6)
    q_anchor = default_grasp(model)
    anchor = AnchorState.capture(model, q_anchor, human_anchor)
    q_prev = model.project_limits(q_anchor + rng.normal(0.0, 0.05, model.dof))
    q = model.project_limits(q_anchor + rng.normal(0.0, 0.2, model.dof))
    weights = CostWeights(d_safe=0.03)

    def fun(x):
        return cost_terms(model, x, q_prev, anchor, human_now, weights).total

    g = cost_gradient(model, q, q_prev, anchor, human_now, weights)
    g_fd = finite_difference_gradient(fun, q, 1e-6)
    assert np.linalg.norm(g - g_fd) <= 1e-4 * np.linalg.norm(g_fd)


if __name__ == "__main__":
    test_zero_at_anchor()
    test_gates_in_targets()
    test_relative_targets()
    test_safety_term()
    test_gradient()
