import numpy as np
import pytest

from dexassist._testing import Paths
from dexassist._testing import hands
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import InvalidFingerError
from dexassist.models import HandModel

paths = Paths(__file__)
rng = np.random.default_rng(0)


def test_load_bundled():
    model = hands.hand21
    assert model.name == "hand21"
    assert model.dof == 21
    assert model.n_chains == 5
    assert model.chain_names == ["thumb", "index", "middle", "ring", "little"]
    assert [s.stop - s.start for s in model.chain_slices] == [5, 4, 4, 4, 4]
    assert model.joint_kinds[:3] == ["roll", "abduction", "flexion"]

    # Degrees converted to radians at load
    assert model.lower_limits[5] == pytest.approx(np.deg2rad(-20))

    # Default collision pairs: adjacent fingers then thumb against others
    pairs = [(p.a, p.b) for p in model.proximity_pairs]
    assert pairs == [(1, 2), (2, 3), (3, 4), (0, 1), (0, 2), (0, 3), (0, 4)]


def test_fk_finger2():
    model = hands.finger2
    assert np.allclose(model.fk_fingertips([0.0, 0.0]), [[0.07, 0.0, 0.0]])
    assert np.allclose(model.fk_fingertips([np.pi / 2, 0.0]), [[0.0, 0.07, 0.0]])
    assert np.allclose(model.fk_fingertips([0.0, np.pi / 2]), [[0.04, 0.03, 0.0]])


def test_fingertip_jacobian():
    model = hands.hand21
    h = 1e-6
    for _ in range(5):
        q = rng.uniform(model.lower_limits, model.upper_limits)
        for finger in range(model.n_chains):
            jac = model.fingertip_jacobian(q, finger)
            fd = np.zeros_like(jac)
            for i in range(model.dof):
                e = np.zeros(model.dof)
                e[i] = h
                fd[:, i] = (
                    model.fk_fingertips(q + e)[finger]
                    - model.fk_fingertips(q - e)[finger]
                ) / (2 * h)
            assert np.allclose(jac, fd, atol=1e-7)

            # Columns outside the chain are exactly zero
            outside = np.ones(model.dof, dtype=bool)
            outside[model.chain_slices[finger]] = False
            assert (jac[:, outside] == 0.0).all()

    with pytest.raises(InvalidFingerError):
        model.fingertip_jacobian(np.zeros(model.dof), 5)


def test_sphere_jacobians():
    model = hands.hand21
    q = rng.uniform(model.lower_limits, model.upper_limits)
    jac = model.sphere_jacobians(q)
    h = 1e-6
    for i in range(model.dof):
        e = np.zeros(model.dof)
        e[i] = h
        fd = (model.sphere_centers(q + e) - model.sphere_centers(q - e)) / (2 * h)
        assert np.allclose(jac[:, :, i], fd, atol=1e-7)


def test_project_limits():
    model = hands.hand21
    q = np.full(model.dof, 10.0)
    p = model.project_limits(q)
    assert np.allclose(p, model.upper_limits)
    assert np.allclose(model.project_limits(-q), model.lower_limits)

    # Limits already satisfied
    q = model.reference_open_config()
    assert np.array_equal(model.project_limits(q), q)

    with pytest.raises(DimensionMismatchError):
        model.project_limits(np.zeros(3))


def test_proximity_distances():
    model = hands.hand21
    distances = model.proximity_distances(model.reference_open_config())
    assert len(distances) == 7
    for pair, d in distances:
        assert d > 0.0

    # No spheres on the planar finger
    assert hands.finger2.proximity_distances([0.1, 0.2]) == []


def test_invalid_model():
    with pytest.raises(ValueError):
        HandModel(
            name="bad",
            chains=[
                {
                    "name": "finger",
                    "joints": [{"axis": [0, 0, 1], "limits": [1.0, -1.0]}],
                }
            ],
        )

    with pytest.raises(ValueError):
        HandModel(
            name="bad",
            chains=[
                {
                    "name": "finger",
                    "joints": [{"axis": [0, 0, 1], "limits": [-1.0, 1.0]}],
                }
            ],
            spheres=[{"chain": 1, "joint": 0, "radius": 0.01}],
        )


def test_load_path():
    filepath = paths.tmp / "finger2_copy.yaml"
    with open(filepath, "w") as fp:
        fp.write(hands.finger2.model_dump_yaml())
    model = HandModel.load(filepath)
    assert model.dof == 2
    assert np.allclose(model.fk_fingertips([0.0, 0.0]), [[0.07, 0.0, 0.0]])


if __name__ == "__main__":
    test_load_bundled()
    test_fk_finger2()
    test_fingertip_jacobian()
    test_sphere_jacobians()
    test_project_limits()
    test_proximity_distances()
    test_invalid_model()
    test_load_path()
