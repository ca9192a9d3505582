"""
Rotation, pose and twist algebra used by the arm and hand controllers.

Rotations are stored as unit quaternions (x, y, z, w) with a canonical
non-negative scalar part and are re-normalized after every composition.
Matrices are produced on demand.
"""

from dataclasses import dataclass
from dataclasses import field

import numpy as np
from scipy.spatial.transform import Rotation as _ScipyRotation

from dexassist._logger import get_logger
from dexassist.constants import SO3_LOG_MAX_ANGLE_MARGIN
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import So3DomainError

logger = get_logger(__name__)


def _as_vector3(value, name: str) -> np.ndarray:
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise DimensionMismatchError(name=name, expected=(3,), got=v.shape)
    return v


def _canonical(q: np.ndarray) -> np.ndarray:
    q = q / np.linalg.norm(q)
    if q[3] < 0.0:
        q = -q
    return q


def _hamilton(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    x1, y1, z1, w1 = q1
    x2, y2, z2, w2 = q2
    return np.array(
        [
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        ]
    )


# --------------------------------------------------------------------------- #
# Rotation                                                                    #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class Rotation:
    """
    Element of SO(3).

    Attributes
    ----------
    quat:
        Unit quaternion (x, y, z, w) with w >= 0.

    Examples
    --------
    ```py
    import numpy as np

    from dexassist.spatial import Rotation

    r = Rotation.from_rotvec([0.0, 0.0, np.pi / 2])
    print(np.round(r.apply([1.0, 0.0, 0.0]), 6))
    # > [0. 1. 0.]
    ```
    """

    quat: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.quat, dtype=float)
        if q.shape != (4,):
            raise DimensionMismatchError(name="quat", expected=(4,), got=q.shape)
        object.__setattr__(self, "quat", _canonical(q))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.array([0.0, 0.0, 0.0, 1.0]))

    @classmethod
    def from_quat(cls, quat) -> "Rotation":
        return cls(np.asarray(quat, dtype=float))

    @classmethod
    def from_rotvec(cls, rotvec) -> "Rotation":
        v = _as_vector3(rotvec, "rotvec")
        return cls(_ScipyRotation.from_rotvec(v).as_quat())

    @classmethod
    def from_matrix(cls, matrix) -> "Rotation":
        m = np.asarray(matrix, dtype=float)
        if m.shape != (3, 3):
            raise DimensionMismatchError(name="matrix", expected=(3, 3), got=m.shape)
        return cls(_ScipyRotation.from_matrix(m).as_quat())

    @property
    def matrix(self) -> np.ndarray:
        x, y, z, w = self.quat
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
                [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
                [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
            ]
        )

    @property
    def rotvec(self) -> np.ndarray:
        return _ScipyRotation.from_quat(self.quat).as_rotvec()

    @property
    def angle(self) -> float:
        return float(2.0 * np.arctan2(np.linalg.norm(self.quat[:3]), self.quat[3]))

    def inverse(self) -> "Rotation":
        x, y, z, w = self.quat
        return Rotation(np.array([-x, -y, -z, w]))

    def compose(self, other: "Rotation") -> "Rotation":
        """Return `self * other`, i.e. `other` applied first."""
        return Rotation(_hamilton(self.quat, other.quat))

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return self.compose(other)

    def apply(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.matrix.T

    def __repr__(self):
        return f"Rotation(quat={np.array2string(self.quat, precision=6)})"


def orthonormality_error(r) -> float:
    """
    Worst deviation of a rotation matrix from orthonormality.

    Parameters
    ----------
    r:
        `Rotation` or 3x3 matrix

    Returns
    -------
    :
        max(|RᵀR - I|_inf, |det R - 1|)
    """
    m = r.matrix if isinstance(r, Rotation) else np.asarray(r, dtype=float)
    err_orth = np.abs(m.T @ m - np.eye(3)).max()
    err_det = abs(np.linalg.det(m) - 1.0)
    return float(max(err_orth, err_det))


def so3_exp(axis_angle) -> Rotation:
    """
    Exponential map from an axis-angle vector to a rotation.

    Parameters
    ----------
    axis_angle:
        Rotation vector (rad). A zero vector gives the identity.

    Returns
    -------
    :
        Rotation
    """
    return Rotation.from_rotvec(axis_angle)


def so3_log(r) -> np.ndarray:
    """
    Logarithm map of a rotation on the principal branch.

    Parameters
    ----------
    r:
        `Rotation` or 3x3 rotation matrix

    Returns
    -------
    :
        Rotation vector (rad)

    Raises
    ------
    So3DomainError
        If the rotation angle is within 1e-6 rad of pi.
    """
    if not isinstance(r, Rotation):
        r = Rotation.from_matrix(r)
    max_angle = np.pi - SO3_LOG_MAX_ANGLE_MARGIN
    angle = r.angle
    if angle > max_angle:
        raise So3DomainError(angle, max_angle)
    return r.rotvec


# --------------------------------------------------------------------------- #
# Pose and Twist                                                              #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class Pose:
    """
    Rigid-body pose. Translation and rotation compose independently of any
    coupled SE(3) exponential.

    Attributes
    ----------
    position:
        Position (m)
    rotation:
        Orientation
    """

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: Rotation = field(default_factory=Rotation.identity)

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vector3(self.position, "position"))

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    def compose(self, other: "Pose") -> "Pose":
        return Pose(
            position=self.position + self.rotation.apply(other.position),
            rotation=self.rotation @ other.rotation,
        )

    def inverse(self) -> "Pose":
        r_inv = self.rotation.inverse()
        return Pose(position=-r_inv.apply(self.position), rotation=r_inv)

    def transform_point(self, p) -> np.ndarray:
        return self.position + self.rotation.apply(p)

    def __repr__(self):
        return (
            f"Pose(position={np.array2string(self.position, precision=6)}, "
            f"rotation={self.rotation!r})"
        )


@dataclass(frozen=True, eq=False)
class Twist:
    """
    Spatial velocity.

    Attributes
    ----------
    linear:
        Linear velocity (m/s)
    angular:
        Angular velocity (rad/s)
    """

    linear: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        linear = _as_vector3(self.linear, "linear")
        angular = _as_vector3(self.angular, "angular")
        if not (np.isfinite(linear).all() and np.isfinite(angular).all()):
            raise ValueError(f"Twist components must be finite ({linear}, {angular})")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "angular", angular)

    @classmethod
    def zero(cls) -> "Twist":
        return cls()

    def scaled(self, k: float) -> "Twist":
        return Twist(linear=k * self.linear, angular=k * self.angular)

    def __add__(self, other: "Twist") -> "Twist":
        return Twist(
            linear=self.linear + other.linear, angular=self.angular + other.angular
        )

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.linear @ self.linear + self.angular @ self.angular))

    def __repr__(self):
        return (
            f"Twist(linear={np.array2string(self.linear, precision=6)}, "
            f"angular={np.array2string(self.angular, precision=6)})"
        )


# --------------------------------------------------------------------------- #
# EMA                                                                         #
# --------------------------------------------------------------------------- #


@dataclass
class EmaFilter:
    """
    Exponential moving average over 3-vectors. The first sample initializes
    the state.

    Attributes
    ----------
    a:
        Smoothing coefficient in (0, 1]
    state:
        Current filtered value
    initialized:
        `True` once a first sample went through
    """

    a: float = 0.3
    state: np.ndarray = field(default_factory=lambda: np.zeros(3))
    initialized: bool = False

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"EMA coefficient must be in (0, 1], got {self.a}")
        self.state = np.asarray(self.state, dtype=float)

    def step(self, sample) -> np.ndarray:
        sample = np.asarray(sample, dtype=float)
        if sample.shape != self.state.shape:
            raise DimensionMismatchError(
                name="sample", expected=self.state.shape, got=sample.shape
            )
        if not self.initialized:
            self.state = sample.copy()
            self.initialized = True
        else:
            self.state = self.a * sample + (1.0 - self.a) * self.state
        return self.state.copy()

    def reset(self) -> None:
        self.state = np.zeros_like(self.state)
        self.initialized = False


def ema_step(filter: EmaFilter, sample) -> np.ndarray:
    """
    Advance an EMA filter by one sample.

    Parameters
    ----------
    filter:
        Filter to update in place
    sample:
        New sample

    Returns
    -------
    :
        Filtered value `a * sample + (1 - a) * previous`
    """
    return filter.step(sample)
