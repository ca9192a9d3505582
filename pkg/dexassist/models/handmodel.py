from dataclasses import dataclass
from pathlib import Path
from typing import Literal
from typing import Union

import numpy as np
from pydantic import Field
from pydantic import PrivateAttr
from pydantic import model_validator

from dexassist._logger import get_logger
from dexassist.constants import BUNDLED_MODELS
from dexassist.constants import MODEL_FILE_VERSION
from dexassist.exceptions import DimensionMismatchError
from dexassist.exceptions import InvalidFingerError
from dexassist.models.basemodel import BaseModel
from dexassist.spatial import Pose
from dexassist.spatial import Rotation
from dexassist.typing import JointVector
from dexassist.typing import Vector3

logger = get_logger(__name__)

MODELS_DIRPATH = Path(__file__).parent.parent / "resources" / "models"


def _skew(v: np.ndarray) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


# --------------------------------------------------------------------------- #
# Model file schema                                                           #
# --------------------------------------------------------------------------- #


class FramePose(BaseModel):
    """
    Fixed frame placement expressed in its parent frame.

    Attributes
    ----------
    position:
        Origin (m)
    rotvec:
        Orientation as a rotation vector (rad)
    """

    position: Vector3 = [0.0, 0.0, 0.0]
    rotvec: Vector3 = [0.0, 0.0, 0.0]

    def to_pose(self) -> Pose:
        return Pose(
            position=np.array(self.position), rotation=Rotation.from_rotvec(self.rotvec)
        )


class Joint(BaseModel):
    """
    Revolute joint. The joint frame sits at `offset` in the parent link frame
    and rotates about `axis` (expressed in that frame).

    Attributes
    ----------
    name:
        Joint name
    axis:
        Rotation axis. Normalized at load.
    offset:
        Translation from the previous joint frame (m)
    limits:
        Lower and upper bound (rad)
    kind:
        Joint role, informative only
    """

    name: str = None
    axis: Vector3
    offset: Vector3 = [0.0, 0.0, 0.0]
    limits: tuple[float, float]
    kind: Literal["flexion", "abduction", "roll"] = "flexion"

    @model_validator(mode="after")
    def check_joint(self) -> "Joint":
        lo, hi = self.limits
        if not lo < hi:
            raise ValueError(f"Joint '{self.name}' limits must satisfy lo < hi.")
        if np.linalg.norm(self.axis) < 1e-12:
            raise ValueError(f"Joint '{self.name}' axis must be non-zero.")
        return self


class Chain(BaseModel):
    """
    Serial finger chain attached to the palm.

    Attributes
    ----------
    name:
        Chain name
    base:
        Chain base frame in the palm frame
    joints:
        Joints from base to tip
    tip_offset:
        Fingertip position in the frame of the last joint (m)
    """

    name: str
    base: FramePose = FramePose()
    joints: list[Joint] = Field(..., min_length=1)
    tip_offset: Vector3 = [0.0, 0.0, 0.0]


class Sphere(BaseModel):
    """
    Collision sphere rigidly attached to a joint frame.

    Attributes
    ----------
    chain:
        Chain index
    joint:
        Joint index within the chain. The sphere moves with joints `0..joint`.
    radius:
        Radius (m)
    offset:
        Center in the joint frame (m)
    """

    chain: int
    joint: int
    radius: float = Field(..., gt=0.0)
    offset: Vector3 = [0.0, 0.0, 0.0]


@dataclass(frozen=True)
class ProximityPair:
    """Pair of collision sphere indices from the configured set"""

    a: int
    b: int

    def swapped(self) -> "ProximityPair":
        return ProximityPair(self.b, self.a)


@dataclass(frozen=True, eq=False)
class HandKinematics:
    """
    Result of one forward kinematics pass.

    Attributes
    ----------
    tips:
        Fingertip positions in the wrist frame, shape (n_chains, 3)
    sphere_centers:
        Collision sphere centers, shape (n_spheres, 3)
    tip_jacobians:
        d(tip)/dq, shape (n_chains, 3, dof). `None` when not requested.
    sphere_jacobians:
        d(center)/dq, shape (n_spheres, 3, dof). `None` when not requested.
    """

    tips: np.ndarray
    sphere_centers: np.ndarray
    tip_jacobians: np.ndarray = None
    sphere_jacobians: np.ndarray = None


# --------------------------------------------------------------------------- #
# Hand Model                                                                  #
# --------------------------------------------------------------------------- #


class HandModel(BaseModel):
    """
    Kinematic hand made of serial chains of revolute joints attached to a
    palm, with sphere-set collision geometry. Chain 0 is always the thumb.
    The joint vector concatenates chain joints in declaration order.

    The model is treated as immutable once loaded: kinematic arrays are
    compiled at construction and every kinematic query is a pure function
    of the joint vector.

    Attributes
    ----------
    version:
        Model file schema version
    name:
        Model name
    palm:
        Palm frame in the wrist frame
    chains:
        Finger chains, thumb first
    spheres:
        Collision spheres
    collision_pairs:
        Sphere index pairs checked by the safety term. Defaults to
        adjacent-finger tip pairs plus thumb tip against every other tip.
        The tip sphere of a chain is its sphere with the highest joint index.

    Examples
    --------
    ```py
    import numpy as np

    from dexassist.models import HandModel

    model = HandModel.load("finger2")
    print(model.fk_fingertips(np.zeros(model.dof)))
    # > [[0.07 0.   0.  ]]
    ```
    """

    version: Literal[1] = MODEL_FILE_VERSION
    name: str
    palm: FramePose = FramePose()
    chains: list[Chain] = Field(..., min_length=1)
    spheres: list[Sphere] = []
    collision_pairs: list[tuple[int, int]] = None
    _arrays: dict = PrivateAttr(default=None)

    @model_validator(mode="after")
    def check_geometry(self) -> "HandModel":
        for i, s in enumerate(self.spheres):
            if not 0 <= s.chain < len(self.chains):
                raise ValueError(f"Sphere {i} references unknown chain {s.chain}.")
            if not 0 <= s.joint < len(self.chains[s.chain].joints):
                raise ValueError(
                    f"Sphere {i} references unknown joint {s.joint} of chain {s.chain}."
                )

        for a, b in self.collision_pairs or []:
            if a == b:
                raise ValueError(f"Collision pair ({a}, {b}) must use distinct spheres.")
            for s in (a, b):
                if not 0 <= s < len(self.spheres):
                    raise ValueError(f"Collision pair references unknown sphere {s}.")

        self._compile()
        return self

    def _default_collision_pairs(self) -> list[tuple[int, int]]:
        tip_sphere = {}
        for i, s in enumerate(self.spheres):
            current = tip_sphere.get(s.chain)
            if current is None or s.joint >= self.spheres[current].joint:
                tip_sphere[s.chain] = i

        pairs = []
        n = len(self.chains)
        for c in range(1, n - 1):
            if c in tip_sphere and c + 1 in tip_sphere:
                pairs += [(tip_sphere[c], tip_sphere[c + 1])]
        if 0 in tip_sphere:
            for c in range(1, n):
                if c in tip_sphere:
                    pairs += [(tip_sphere[0], tip_sphere[c])]
        return pairs

    # ----------------------------------------------------------------------- #
    # Loading                                                                 #
    # ----------------------------------------------------------------------- #

    @classmethod
    def load(cls, name_or_path: Union[str, Path]) -> "HandModel":
        """
        Load a bundled model by name or a model file by path.

        Parameters
        ----------
        name_or_path:
            One of the bundled model names (`hand21`, `finger2`) or a path to
            a YAML model file.

        Returns
        -------
        :
            Hand model
        """
        if str(name_or_path) in BUNDLED_MODELS:
            filepath = MODELS_DIRPATH / f"{name_or_path}.yaml"
        else:
            filepath = Path(name_or_path)
        logger.debug(f"Reading hand model from {filepath}")
        with open(filepath, "r") as fp:
            return cls.model_validate_yaml(fp)

    # ----------------------------------------------------------------------- #
    # Compiled arrays                                                         #
    # ----------------------------------------------------------------------- #

    def _compile(self) -> None:
        n_chains = len(self.chains)
        depth = max(len(c.joints) for c in self.chains)

        offsets = np.zeros((n_chains, depth, 3))
        axes = np.zeros((n_chains, depth, 3))
        axes[:, :, 2] = 1.0
        mask = np.zeros((n_chains, depth), dtype=bool)
        qidx = np.zeros((n_chains, depth), dtype=int)
        base_r = np.zeros((n_chains, 3, 3))
        base_p = np.zeros((n_chains, 3))
        tip_offsets = np.zeros((n_chains, 3))
        lower, upper, kinds, slices = [], [], [], []

        palm = self.palm.to_pose()
        i = 0
        for c, chain in enumerate(self.chains):
            base = palm.compose(chain.base.to_pose())
            base_r[c] = base.rotation.matrix
            base_p[c] = base.position
            tip_offsets[c] = chain.tip_offset
            slices += [slice(i, i + len(chain.joints))]
            for d, joint in enumerate(chain.joints):
                offsets[c, d] = joint.offset
                axes[c, d] = np.array(joint.axis) / np.linalg.norm(joint.axis)
                mask[c, d] = True
                qidx[c, d] = i
                lower += [joint.limits[0]]
                upper += [joint.limits[1]]
                kinds += [joint.kind]
                i += 1

        skews = np.array([[_skew(a) for a in row] for row in axes])

        pairs = self.collision_pairs
        if pairs is None:
            pairs = self._default_collision_pairs()

        sphere_chain = np.array([s.chain for s in self.spheres], dtype=int)
        sphere_joint = np.array([s.joint for s in self.spheres], dtype=int)
        sphere_mask = np.zeros((len(self.spheres), depth), dtype=bool)
        for k, s in enumerate(self.spheres):
            sphere_mask[k, : s.joint + 1] = True

        self._arrays = {
            "n_chains": n_chains,
            "depth": depth,
            "dof": i,
            "offsets": offsets,
            "axes": axes,
            "skews": skews,
            "skews2": skews @ skews,
            "mask": mask,
            "qidx": qidx,
            "base_r": base_r,
            "base_p": base_p,
            "tip_offsets": tip_offsets,
            "lower": np.array(lower),
            "upper": np.array(upper),
            "kinds": kinds,
            "slices": slices,
            "mask_nz": np.nonzero(mask),
            "sphere_chain": sphere_chain,
            "sphere_joint": sphere_joint,
            "sphere_offsets": np.array(
                [s.offset for s in self.spheres], dtype=float
            ).reshape(-1, 3),
            "sphere_radii": np.array([s.radius for s in self.spheres], dtype=float),
            "sphere_mask_nz": np.nonzero(sphere_mask & mask[sphere_chain]),
            "pairs": np.array(pairs, dtype=int).reshape(-1, 2),
        }

    # ----------------------------------------------------------------------- #
    # Properties                                                              #
    # ----------------------------------------------------------------------- #

    @property
    def dof(self) -> int:
        return self._arrays["dof"]

    @property
    def n_chains(self) -> int:
        return self._arrays["n_chains"]

    @property
    def chain_names(self) -> list[str]:
        return [c.name for c in self.chains]

    @property
    def chain_slices(self) -> list[slice]:
        """Joint vector slice of each chain"""
        return list(self._arrays["slices"])

    @property
    def joint_kinds(self) -> list[str]:
        return list(self._arrays["kinds"])

    @property
    def lower_limits(self) -> np.ndarray:
        return self._arrays["lower"].copy()

    @property
    def upper_limits(self) -> np.ndarray:
        return self._arrays["upper"].copy()

    @property
    def sphere_radii(self) -> np.ndarray:
        return self._arrays["sphere_radii"].copy()

    @property
    def proximity_pairs(self) -> list[ProximityPair]:
        return [ProximityPair(int(a), int(b)) for a, b in self._arrays["pairs"]]

    @property
    def pair_array(self) -> np.ndarray:
        return self._arrays["pairs"]

    # ----------------------------------------------------------------------- #
    # Kinematics                                                              #
    # ----------------------------------------------------------------------- #

    def check_config(self, q) -> JointVector:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dof,):
            raise DimensionMismatchError(name="q", expected=(self.dof,), got=q.shape)
        return q

    def project_limits(self, q) -> JointVector:
        """
        Clamp a joint vector to the joint limits.

        Parameters
        ----------
        q:
            Joint vector (rad)

        Returns
        -------
        :
            Component-wise clamp to [lo, hi]
        """
        q = self.check_config(q)
        return np.clip(q, self._arrays["lower"], self._arrays["upper"])

    def reference_open_config(self) -> JointVector:
        """Zero pose projected to the joint limits"""
        return self.project_limits(np.zeros(self.dof))

    def kinematics(self, q, jacobians: bool = True) -> HandKinematics:
        """
        Forward kinematics of every chain, batched over chains.

        Each joint applies `T <- T @ Trans(offset) @ Rot(axis, q)`. Fingertips
        and sphere centers are expressed in the wrist frame.

        Parameters
        ----------
        q:
            Joint vector (rad)
        jacobians:
            If `True`, point Jacobians of fingertips and sphere centers are
            also computed.

        Returns
        -------
        :
            Kinematics pass output
        """
        q = self.check_config(q)
        arr = self._arrays
        depth = arr["depth"]

        angles = np.where(arr["mask"], q[arr["qidx"]], 0.0)
        sin = np.sin(angles)[..., None, None]
        one_minus_cos = (1.0 - np.cos(angles))[..., None, None]
        joint_r = np.eye(3) + sin * arr["skews"] + one_minus_cos * arr["skews2"]

        r = arr["base_r"]
        p = arr["base_p"]
        origins = np.empty((arr["n_chains"], depth, 3))
        world_axes = np.empty((arr["n_chains"], depth, 3))
        frames = np.empty((arr["n_chains"], depth, 3, 3))
        for d in range(depth):
            p = p + np.einsum("cij,cj->ci", r, arr["offsets"][:, d])
            world_axes[:, d] = np.einsum("cij,cj->ci", r, arr["axes"][:, d])
            r = r @ joint_r[:, d]
            origins[:, d] = p
            frames[:, d] = r

        tips = p + np.einsum("cij,cj->ci", r, arr["tip_offsets"])

        sc = arr["sphere_chain"]
        sj = arr["sphere_joint"]
        centers = origins[sc, sj] + np.einsum(
            "sij,sj->si", frames[sc, sj], arr["sphere_offsets"]
        )

        if not jacobians:
            return HandKinematics(tips=tips, sphere_centers=centers)

        ci, di = arr["mask_nz"]
        cols = np.cross(world_axes[ci, di], tips[ci] - origins[ci, di])
        tip_jac = np.zeros((arr["n_chains"], 3, arr["dof"]))
        tip_jac[ci, :, arr["qidx"][ci, di]] = cols

        si, dj = arr["sphere_mask_nz"]
        sphere_jac = np.zeros((len(sc), 3, arr["dof"]))
        if len(si) > 0:
            chains = sc[si]
            cols = np.cross(
                world_axes[chains, dj], centers[si] - origins[chains, dj]
            )
            sphere_jac[si, :, arr["qidx"][chains, dj]] = cols

        return HandKinematics(
            tips=tips,
            sphere_centers=centers,
            tip_jacobians=tip_jac,
            sphere_jacobians=sphere_jac,
        )

    def fk_fingertips(self, q) -> np.ndarray:
        """
        Fingertip positions in the wrist frame.

        Parameters
        ----------
        q:
            Joint vector (rad)

        Returns
        -------
        :
            Array of shape (n_chains, 3), thumb first
        """
        return self.kinematics(q, jacobians=False).tips

    def fingertip_jacobian(self, q, finger: int) -> np.ndarray:
        """
        Point Jacobian of one fingertip. Columns of joints outside the finger
        chain are exactly zero.

        Parameters
        ----------
        q:
            Joint vector (rad)
        finger:
            Chain index (thumb is 0)

        Returns
        -------
        :
            Array of shape (3, dof) in m/rad
        """
        if not 0 <= finger < self.n_chains:
            raise InvalidFingerError(finger, self.n_chains)
        return self.kinematics(q).tip_jacobians[finger]

    def sphere_centers(self, q) -> np.ndarray:
        return self.kinematics(q, jacobians=False).sphere_centers

    def sphere_jacobians(self, q) -> np.ndarray:
        return self.kinematics(q).sphere_jacobians

    def pair_distances(self, centers: np.ndarray) -> np.ndarray:
        """Signed distance (center distance minus radii) of each collision pair"""
        pairs = self._arrays["pairs"]
        if len(pairs) == 0:
            return np.zeros(0)
        radii = self._arrays["sphere_radii"]
        diff = centers[pairs[:, 0]] - centers[pairs[:, 1]]
        return np.linalg.norm(diff, axis=1) - radii[pairs[:, 0]] - radii[pairs[:, 1]]

    def proximity_distances(self, q) -> list[tuple[ProximityPair, float]]:
        """
        Distances between configured collision sphere pairs. Negative values
        denote penetration.

        Parameters
        ----------
        q:
            Joint vector (rad)

        Returns
        -------
        :
            List of (pair, distance in m)
        """
        distances = self.pair_distances(self.sphere_centers(q))
        return [(p, float(d)) for p, d in zip(self.proximity_pairs, distances)]

