from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import Field

Vector3 = Annotated[list[float], Field(min_length=3, max_length=3)]
"""3-vector as it appears in model and config files"""

JointVector = NDArray[np.float64]
"""Joint-angle vector (rad), one entry per model DoF"""

Points = NDArray[np.float64]
"""Stack of 3D points with shape (n, 3)"""
