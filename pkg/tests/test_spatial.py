import numpy as np
import pytest

from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import So3DomainError
from dexassist.spatial import EmaFilter
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.spatial import Twist
from dexassist.spatial import ema_step
from dexassist.spatial import orthonormality_error
from dexassist.spatial import so3_exp
from dexassist.spatial import so3_log

rng = np.random.default_rng(0)


def test_exp_log():
    for _ in range(200):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(0.0, np.pi - 1e-3)
        w = angle * axis
        assert np.allclose(so3_log(so3_exp(w)), w, atol=1e-9)

    # Zero vector
    assert np.allclose(so3_exp([0.0, 0.0, 0.0]).matrix, np.eye(3))
    assert np.allclose(so3_log(Rotation.identity()), 0.0)


def test_log_domain():
    with pytest.raises(So3DomainError):
        so3_log(so3_exp([np.pi, 0.0, 0.0]))

    # Matrix input
    w = so3_log(so3_exp([0.0, 0.3, 0.0]).matrix)
    assert np.allclose(w, [0.0, 0.3, 0.0])


def test_composition_orthonormality():
    r = Rotation.identity()
    for _ in range(10_000):
        r = r @ so3_exp(rng.normal(0.0, 0.1, size=3))
    assert orthonormality_error(r) < 1e-9
    assert r.quat[3] >= 0.0


@pytest.mark.slow
def test_composition_orthonormality_full():
    r = Rotation.identity()
    for w in rng.normal(0.0, 0.1, size=(1_000_000, 3)):
        r = r @ so3_exp(w)
    assert orthonormality_error(r) < 1e-9


def test_rotation():
    r = Rotation.from_rotvec([0.0, 0.0, np.pi / 2])
    assert np.allclose(r.apply([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0])
    assert np.allclose(r.inverse().apply(r.apply([0.1, 0.2, 0.3])), [0.1, 0.2, 0.3])
    assert r.angle == pytest.approx(np.pi / 2)
    assert np.allclose(Rotation.from_matrix(r.matrix).quat, r.quat)

    with pytest.raises(DimensionMismatchError):
        Rotation.from_rotvec([0.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        Rotation.from_quat([0.0, 0.0, 1.0])


def test_pose():
    a = Pose(position=[0.1, 0.0, 0.0], rotation=so3_exp([0.0, 0.0, np.pi / 2]))
    b = Pose(position=[0.0, 0.2, 0.0])
    c = a.compose(b)
    assert np.allclose(c.position, [-0.1, 0.0, 0.0])

    identity = a.compose(a.inverse())
    assert np.allclose(identity.position, 0.0)
    assert identity.rotation.angle == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(a.transform_point([1.0, 0.0, 0.0]), [0.1, 1.0, 0.0])


def test_twist():
    t = Twist(linear=[1.0, 0.0, 0.0], angular=[0.0, 0.0, 2.0])
    assert t.norm == pytest.approx(np.sqrt(5.0))
    assert np.allclose(t.scaled(0.5).angular, [0.0, 0.0, 1.0])
    assert np.allclose((t + t).linear, [2.0, 0.0, 0.0])
    assert Twist.zero().norm == 0.0

    with pytest.raises(ValueError):
        Twist(linear=[np.nan, 0.0, 0.0])


def test_ema():
    f = EmaFilter(a=0.5)
    assert np.allclose(ema_step(f, [1.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    assert np.allclose(ema_step(f, [0.0, 0.0, 0.0]), [0.5, 0.0, 0.0])

    f.reset()
    assert not f.initialized
    assert np.allclose(f.step([0.0, 2.0, 0.0]), [0.0, 2.0, 0.0])

    # Constant input is a fixed point
    f = EmaFilter(a=0.3)
    for _ in range(5):
        out = f.step([0.1, 0.2, 0.3])
    assert np.allclose(out, [0.1, 0.2, 0.3])

    with pytest.raises(ValueError):
        EmaFilter(a=0.0)
    with pytest.raises(DimensionMismatchError):
        f.step([1.0, 2.0])


if __name__ == "__main__":
    test_exp_log()
    test_log_domain()
    test_composition_orthonormality()
    test_composition_orthonormality_full()
    test_rotation()
    test_pose()
    test_twist()
    test_ema()
