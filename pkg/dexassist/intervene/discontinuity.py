from typing import Sequence
from typing import Union

import numpy as np

from dexassist._logger import get_logger
from dexassist.exceptions import ToggleOutOfRangeError
from dexassist.intervene.fusion import FusedCommand
from dexassist.models.reports import DiscontinuityReport

logger = get_logger(__name__)


def toggle_steps_from_times(
    commands: Sequence[FusedCommand], times: Sequence[float], tol: float = 1e-9
) -> list[int]:
    """
    Step of the first command emitted at or after each toggle time.
    """
    stamps = np.array([c.timestamp for c in commands], dtype=float)
    return [int(i) for i in np.searchsorted(stamps, np.asarray(times) - tol)]


def measure_discontinuity(
    commands: Sequence[FusedCommand],
    toggles: Sequence[Union[int, float]],
    method: str = None,
) -> DiscontinuityReport:
    """
    Hand command jump across each intervention onset: the joint-space L2
    norm of `hand[t0] - hand[t0 - 1]`.

    Parameters
    ----------
    commands:
        Executed commands, one per control step, in time order
    toggles:
        Onsets, as control step indices (int) or control times (float)
    method:
        Method label of the report

    Returns
    -------
    :
        Discontinuity report

    Examples
    --------
    ```py
    import numpy as np

    from dexassist.armshare import ArmCommand
    from dexassist.intervene import FusedCommand
    from dexassist.intervene import measure_discontinuity
    from dexassist.spatial import Pose

    commands = [
        FusedCommand(
            arm=ArmCommand(target=Pose.identity()),
            hand=np.array([0.0, 0.1 * i]),
            mode="AUTONOMOUS",
            timestamp=0.02 * i,
        )
        for i in range(4)
    ]
    report = measure_discontinuity(commands, [2])
    print(round(report.mean, 6))
    # > 0.1
    ```
    """
    n = len(commands)
    toggles = list(toggles)
    if toggles and all(isinstance(t, (int, np.integer)) for t in toggles):
        steps = [int(t) for t in toggles]
    else:
        steps = toggle_steps_from_times(commands, [float(t) for t in toggles])

    jumps = []
    for s in steps:
        if not 1 <= s < n:
            raise ToggleOutOfRangeError(s, 0, n - 1)
        dq = commands[s].hand - commands[s - 1].hand
        jumps += [float(np.linalg.norm(dq))]

    report = DiscontinuityReport.from_jumps(jumps, steps, method=method)
    if jumps:
        logger.debug(
            f"Measured {len(jumps)} onset jumps ({method}), mean {report.mean:.3e}"
        )
    return report
