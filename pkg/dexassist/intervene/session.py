"""
Per-stream intervention state: current mode, anchor, hand retargeting method
and arm residual controller. One session drives one control stream and is
strictly sequential.
"""

import time
from dataclasses import dataclass

import numpy as np

from dexassist._logger import get_logger
from dexassist.armshare import ArmCommand
from dexassist.armshare import ResidualArmController
from dexassist.constants import SUPPORTED_METHODS
from dexassist.intervene.fusion import FusedCommand
from dexassist.intervene.fusion import fuse_hand
from dexassist.keyvec import HumanHandSample
from dexassist.keyvec import KeyVectors
from dexassist.keyvec import NormalizationMap
from dexassist.keyvec import normalize_human
from dexassist.models.armshareconfig import ArmShareConfig
from dexassist.models.costweights import CostWeights
from dexassist.models.handmodel import HandModel
from dexassist.models.interventionmode import InterventionMode
from dexassist.models.records import HumanSummary
from dexassist.models.solverconfig import BaselineConfig
from dexassist.models.solverconfig import SolverConfig
from dexassist.retarget.baselines import TeleopBackend
from dexassist.retarget.baselines import delta_cmd_retarget
from dexassist.retarget.baselines import jacobian_retarget
from dexassist.retarget.costs import AnchorState
from dexassist.retarget.relative import solve_step
from dexassist.retarget.solver import SolveReport
from dexassist.retarget.solver import SolverWorkspace
from dexassist.spatial import Pose
from dexassist.spatial import Twist

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AnchorEvent:
    """
    One intervention onset.

    Attributes
    ----------
    step:
        Control step of the onset
    timestamp:
        Control time of the onset (s)
    mode:
        Engaged mode
    anchor:
        Captured anchor state
    """

    step: int
    timestamp: float
    mode: InterventionMode
    anchor: AnchorState


@dataclass(frozen=True, eq=False)
class StepResult:
    """
    Outcome of one control step.

    Attributes
    ----------
    command:
        Executed command
    human_hand:
        Operator-side hand command, `None` when autonomous
    human_kv:
        Normalized human key vectors of the step
    residual:
        Unscaled residual twist
    solve_seconds:
        Wall time of the operator-side hand retargeting (s), `None` when
        autonomous
    solve_report:
        Relative retargeting report, when that method ran
    """

    command: FusedCommand
    human_hand: np.ndarray
    human_kv: KeyVectors
    residual: Twist
    solve_seconds: float = None
    solve_report: SolveReport = None

    def human_summary(self) -> HumanSummary:
        d = np.linalg.norm(self.human_kv.opposition, axis=1)
        return HumanSummary(
            thumb_distances=d.tolist(),
            residual_norm=self.residual.norm,
        )


class InterventionSession:
    """
    Intervention state machine fusing policy and operator commands.

    Parameters
    ----------
    model:
        Robot hand model
    normalization:
        Calibrated human normalization map
    method:
        Operator hand retargeting method
    weights:
        Retargeting cost weights
    solver:
        Retargeting solver settings
    baselines:
        Baseline retargeters settings
    armshare:
        Shared arm control settings
    q_teleop_init:
        Initial warm start of the teleoperation backend. Reference open pose
        if `None`.

    Examples
    --------
    ```py
    from dexassist.intervene import InterventionSession
    from dexassist.keyvec import NormalizationMap
    from dexassist.models import HandModel

    model = HandModel.load("hand21")
    session = InterventionSession(
        model, NormalizationMap.identity(model.n_chains), method="relative"
    )
    print(session.mode.kind)
    # > AUTONOMOUS
    ```
    """

    def __init__(
        self,
        model: HandModel,
        normalization: NormalizationMap,
        method: str = "relative",
        weights: CostWeights = None,
        solver: SolverConfig = None,
        baselines: BaselineConfig = None,
        armshare: ArmShareConfig = None,
        q_teleop_init=None,
    ):
        if method not in SUPPORTED_METHODS:
            raise ValueError(
                f"Method '{method}' is not supported. Available: {SUPPORTED_METHODS}"
            )
        self.model = model
        self.normalization = normalization
        self.method = method
        self.weights = weights or CostWeights()
        self.solver = solver or SolverConfig()
        self.baselines = baselines or BaselineConfig()
        self.arm = ResidualArmController(armshare)
        self.workspace = SolverWorkspace()

        self.teleop = None
        if method in ("teleop", "deltacmd"):
            self.teleop = TeleopBackend(
                model, self.weights, self.solver, q_init=q_teleop_init
            )
        self._teleop_timestamp = None

        self.mode = InterventionMode.autonomous()
        self.anchor: AnchorState = None
        self.anchors: list[AnchorEvent] = []
        self.q_exec: np.ndarray = None
        self.q_human: np.ndarray = None
        self._human_prev: KeyVectors = None
        self.step_index = 0

    # ----------------------------------------------------------------------- #
    # Properties                                                              #
    # ----------------------------------------------------------------------- #

    @property
    def engaged(self) -> bool:
        return self.mode.engaged

    # ----------------------------------------------------------------------- #
    # Teleop backend                                                          #
    # ----------------------------------------------------------------------- #

    def _teleop_command(self, timestamp: float, human_kv: KeyVectors) -> np.ndarray:
        # The backend runs once per human sample
        if self._teleop_timestamp != timestamp:
            self.teleop.step(human_kv)
            self._teleop_timestamp = timestamp
        return self.teleop.q.copy()

    # ----------------------------------------------------------------------- #
    # Toggles                                                                 #
    # ----------------------------------------------------------------------- #

    def toggle_intervention(
        self,
        mode: InterventionMode,
        q_now,
        human: HumanHandSample,
        now: float = None,
    ) -> None:
        """
        Switch intervention mode.

        Engaging captures the anchor from `q_now` and the current human
        sample, resets the arm EMA filters and, for DeltaCmd, the backend
        anchor. Disengaging clears the anchor. Engaging while engaged is a
        no-op.

        Parameters
        ----------
        mode:
            Requested mode
        q_now:
            Hand command currently executed by the robot (rad)
        human:
            Human sample of the engage step
        now:
            Control time (s). Human sample time if `None`.
        """
        if now is None:
            now = human.timestamp

        if not mode.engaged:
            if not self.engaged:
                logger.warning(f"Disengage at step {self.step_index} while autonomous")
                return
            logger.info(
                f"Intervention {self.mode.kind} released at step {self.step_index}"
            )
            self.mode = mode
            self.anchor = None
            self._human_prev = None
            return

        if self.engaged:
            logger.warning(
                f"Intervention already engaged ({self.mode.kind}) at step "
                f"{self.step_index}, {mode.kind} request ignored"
            )
            return

        human_kv = normalize_human(human, self.normalization)
        self.anchor = AnchorState.capture(self.model, q_now, human_kv)
        self.arm.reset_filters()
        if self.teleop is not None:
            self._teleop_command(human.timestamp, human_kv)
            self.teleop.capture_anchor()
        self.q_human = self.anchor.q_anchor.copy()
        self._human_prev = human_kv
        self.mode = mode
        self.anchors += [
            AnchorEvent(step=self.step_index, timestamp=now, mode=mode, anchor=self.anchor)
        ]
        logger.info(
            f"Intervention {mode.kind} engaged at step {self.step_index} "
            f"(beta_arm={mode.beta_arm}, beta_hand={mode.beta_hand})"
        )

    # ----------------------------------------------------------------------- #
    # Step                                                                    #
    # ----------------------------------------------------------------------- #

    def push_vr(self, timestamp: float, pose: Pose) -> None:
        """Feed one VR wrist pose (device frame) to the arm controller"""
        self.arm.push_vr(timestamp, pose)

    def _human_hand(self, human: HumanHandSample, human_kv: KeyVectors):
        report = None
        if self.method == "relative":
            report = solve_step(
                self.model,
                self.anchor,
                human_kv,
                self.q_human,
                self.weights,
                self.solver,
                self.workspace,
            )
            q = report.q_solution
        elif self.method == "jacobian":
            disp = human_kv.wrist_to_tip - self._human_prev.wrist_to_tip
            q = jacobian_retarget(
                self.model, self.q_human, disp, damping=self.baselines.damping
            )
        elif self.method == "deltacmd":
            q = delta_cmd_retarget(
                self.anchor.q_anchor,
                self._teleop_command(human.timestamp, human_kv),
                self.teleop.q_anchor,
                model=self.model,
            )
        else:
            q = self._teleop_command(human.timestamp, human_kv)
        return q, report

    def step(
        self,
        policy_hand,
        policy_arm: ArmCommand,
        human: HumanHandSample,
        now: float,
    ) -> StepResult:
        """
        Run one control step: retarget the operator hand when engaged, fuse
        hand and arm commands with the mode authority weights and advance the
        session.

        Parameters
        ----------
        policy_hand:
            Policy hand command (rad)
        policy_arm:
            Policy arm command
        human:
            Human sample of the step
        now:
            Control time (s)

        Returns
        -------
        :
            Step result holding the executed command
        """
        policy_hand = self.model.check_config(policy_hand)
        human_kv = normalize_human(human, self.normalization)
        if self.teleop is not None:
            self._teleop_command(human.timestamp, human_kv)

        human_hand = None
        report = None
        elapsed = None
        if self.engaged:
            t0 = time.perf_counter()
            human_hand, report = self._human_hand(human, human_kv)
            elapsed = time.perf_counter() - t0
            hand = fuse_hand(policy_hand, human_hand, self.mode.beta_hand, self.model)
            self.q_human = human_hand
            self._human_prev = human_kv
        else:
            hand = self.model.project_limits(policy_hand)

        arm, residual = self.arm.step(policy_arm, self.mode.beta_arm, now)

        command = FusedCommand(arm=arm, hand=hand, mode=self.mode.kind, timestamp=now)
        self.q_exec = hand
        self.step_index += 1
        return StepResult(
            command=command,
            human_hand=human_hand,
            human_kv=human_kv,
            residual=residual,
            solve_seconds=elapsed,
            solve_report=report,
        )
