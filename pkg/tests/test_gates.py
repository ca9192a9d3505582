import numpy as np
import pytest

from dexassist.models import CostWeights
from dexassist.retarget.gates import gate_alpha
from dexassist.retarget.gates import gate_beta
from dexassist.retarget.gates import gate_omega
from dexassist.retarget.gates import huber
from dexassist.retarget.gates import huber_weight
from dexassist.retarget.gates import smoothstep

w = CostWeights()


def test_smoothstep():
    assert smoothstep(-1.0) == 0.0
    assert smoothstep(0.0) == 0.0
    assert smoothstep(0.5) == pytest.approx(0.5)
    assert smoothstep(1.0) == 1.0
    assert smoothstep(2.0) == 1.0


def test_gate_beta():
    assert gate_beta(0.0, w) == pytest.approx(w.beta_min)
    assert gate_beta(w.d_lo, w) == pytest.approx(w.beta_min)
    assert gate_beta(w.d_hi, w) == pytest.approx(1.0)
    assert gate_beta(1.0, w) == pytest.approx(1.0)

    # Monotone in between
    d = np.linspace(w.d_lo, w.d_hi, 50)
    assert (np.diff(gate_beta(d, w)) >= 0).all()


def test_gate_alpha_omega():
    assert gate_alpha(w.d_on, w) == 0.0
    assert gate_alpha(w.d_off, w) == 1.0
    assert gate_omega(w.d_on, w) == pytest.approx(w.omega_max)
    assert gate_omega(w.d_off, w) == 0.0

    d = np.linspace(0.0, 0.1, 101)
    assert np.allclose(gate_omega(d, w), w.omega_max * (1.0 - gate_alpha(d, w)))


def test_huber():
    delta = 0.01
    assert huber(0.0, delta) == 0.0
    assert huber(0.005, delta) == pytest.approx(0.5 * 0.005**2)
    assert huber(0.02, delta) == pytest.approx(delta * (0.02 - 0.5 * delta))

    # Continuous value and slope at the knee
    eps = 1e-9
    assert huber(delta - eps, delta) == pytest.approx(huber(delta + eps, delta))
    slope_lo = (huber(delta, delta) - huber(delta - eps, delta)) / eps
    slope_hi = (huber(delta + eps, delta) - huber(delta, delta)) / eps
    assert slope_lo == pytest.approx(slope_hi, rel=1e-4)

    assert huber_weight(0.005, delta) == 1.0
    assert huber_weight(0.02, delta) == pytest.approx(0.5)


def test_weights_validation():
    with pytest.raises(ValueError):
        CostWeights(d_lo=0.1, d_hi=0.05)
    with pytest.raises(ValueError):
        CostWeights(d_on=0.06, d_off=0.05)
    with pytest.raises(ValueError):
        CostWeights(opposition_fingers=[0, 1])
    with pytest.raises(ValueError):
        CostWeights(opposition_fingers=[1, 1])
    assert CostWeights(opposition_fingers=[3, 1]).resolve_opposition_fingers(5) == [
        1,
        3,
    ]
    assert CostWeights().resolve_opposition_fingers(5) == [1, 2, 3, 4]


if __name__ == "__main__":
    test_smoothstep()
    test_gate_beta()
    test_gate_alpha_omega()
    test_huber()
    test_weights_validation()
