"""
Closed-loop kinematic replay: policy stream, operator streams and toggle
schedule go through the intervention session; executed hand commands are
taken as achieved states at the next step.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from planck import units

from dexassist._logger import get_logger
from dexassist.exceptions import CorrectionLogError
from dexassist.exceptions import NonFiniteCostError
from dexassist.exceptions import RolloutAbortedError
from dexassist.intervene.correctionlog import CorrectionLog
from dexassist.intervene.correctionlog import read_correction_log
from dexassist.intervene.correctionlog import record_step
from dexassist.intervene.discontinuity import measure_discontinuity
from dexassist.intervene.fusion import FusedCommand
from dexassist.intervene.session import AnchorEvent
from dexassist.intervene.session import InterventionSession
from dexassist.intervene.session import StepResult
from dexassist.models.records import CorrectionLogHeader
from dexassist.models.basemodel import BaseModel
from dexassist.models.records import CorrectionRecord
from dexassist.models.reports import MetricsReport
from dexassist.models.scenariospec import ScenarioSpec
from dexassist.models.simconfig import SimConfig
from dexassist.sim.policy import MockPolicyStream
from dexassist.sim.scenario import Scenario
from dexassist.sim.scenario import generate_scenario

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class RolloutResult:
    """
    Outcome of one rollout.

    Attributes
    ----------
    scenario:
        Generated scenario streams
    commands:
        Executed commands, one per control step
    records:
        Correction records, one per control step
    anchors:
        Intervention onsets
    metrics:
        Rollout metrics
    policy:
        Mock policy with its chunk counters
    log_path:
        Correction log path, `None` if no log was written
    """

    scenario: Scenario
    commands: list[FusedCommand]
    records: list[CorrectionRecord]
    anchors: list[AnchorEvent]
    metrics: MetricsReport
    policy: MockPolicyStream
    log_path: Path = None


def _tracking_error(session: InterventionSession, result: StepResult) -> float:
    anchor = session.anchor
    v_exec = session.model.fk_fingertips(result.command.hand)
    target = anchor.robot_kv_anchor.wrist_to_tip + (
        result.human_kv.wrist_to_tip - anchor.human_kv_anchor.wrist_to_tip
    )
    return float(np.linalg.norm(v_exec - target, axis=1).mean())


def run_rollout(
    spec: ScenarioSpec,
    method: str,
    config: SimConfig = None,
    seed: int = None,
    log_path: Union[str, Path] = None,
    threaded_log: bool = None,
) -> RolloutResult:
    """
    Replay a scenario with one hand retargeting method.

    Parameters
    ----------
    spec:
        Scenario specification
    method:
        Hand retargeting method (`relative`, `jacobian`, `deltacmd` or
        `teleop`)
    config:
        Simulation configuration. Bundled default if `None`.
    seed:
        Scenario seed. Specification seed if `None`.
    log_path:
        Correction log output path. No log is written if `None`.
    threaded_log:
        Offload log writes to a writer thread. Settings default if `None`.

    Returns
    -------
    :
        Rollout result

    Raises
    ------
    RolloutAbortedError
        If the retargeting cost turns non-finite. The log is closed and
        flagged as partial.

    Examples
    --------
    ```py
    from dexassist.models import ScenarioSpec
    from dexassist.sim import run_rollout

    spec = ScenarioSpec.load("open_hand_misaligned")
    result = run_rollout(spec, "relative")
    print(len(result.metrics.discontinuity.jumps))
    # > 3
    ```
    """
    if config is None:
        config = SimConfig.load()
    if seed is None:
        seed = spec.seed
    model = config.model
    scenario = generate_scenario(spec, model, config.rollout, seed)

    session = InterventionSession(
        model,
        scenario.normalization,
        method=method,
        weights=config.weights,
        solver=config.solver,
        baselines=config.baselines,
        armshare=config.armshare,
        q_teleop_init=scenario.q_calibration,
    )
    policy = MockPolicyStream(
        scenario.policy_hand, scenario.policy_arm, horizon=config.rollout.horizon
    )

    toggles = {}
    for step, toggle in scenario.toggles:
        toggles[step] = toggles.get(step, []) + [toggle]

    sink = None
    if log_path is not None:
        header = CorrectionLogHeader(
            method=method,
            seed=seed,
            scenario=spec.model_dump(mode="json"),
            config=config.model_dump(mode="json"),
        )
        sink = CorrectionLog(log_path, header, threaded=threaded_log)

    logger.info(
        f"Running scenario '{spec.name}' with method '{method}' (seed {seed}, "
        f"{scenario.n_steps} steps)"
    )

    commands = []
    records = []
    tracking_error = []
    drift = []
    target_offset = []
    runtime_ms = []
    vr_index = 0
    q_exec = None
    prefix = config.rollout.observation_prefix

    for k, t in enumerate(scenario.times):
        while vr_index < len(scenario.vr) and scenario.vr[vr_index][0] <= t + 1e-9:
            session.push_vr(*scenario.vr[vr_index])
            vr_index += 1

        human = scenario.human[k]
        for toggle in toggles.get(k, []):
            mode = config.intervention.make_mode(
                toggle.kind, toggle.beta_arm, toggle.beta_hand
            )
            session.toggle_intervention(mode, q_exec, human, now=float(t))

        hand_pi, arm_pi = policy.next_action(k)
        try:
            result = session.step(hand_pi, arm_pi, human, float(t))
        except NonFiniteCostError as e:
            if sink is not None:
                sink.close(complete=False, reason=str(e))
            raise RolloutAbortedError(k, str(e), method) from e

        command = result.command
        policy_record = FusedCommand(
            arm=arm_pi, hand=hand_pi, mode="AUTONOMOUS", timestamp=float(t)
        ).to_record()
        record = CorrectionRecord(
            step=k,
            timestamp=float(t),
            observation_id=f"{prefix}-{spec.name}-{seed}-{k:06d}",
            executed=command.to_record(),
            policy=policy_record,
            human=result.human_summary(),
            intervention=command.mode != "AUTONOMOUS",
        )
        if sink is not None:
            try:
                record_step(sink, record)
            except CorrectionLogError:
                sink.close(complete=False, reason=f"write failure at step {k}")
                raise

        commands += [command]
        records += [record]
        q_exec = command.hand

        drift += [result.residual.norm]
        target_offset += [
            float(np.linalg.norm(command.arm.target.position - arm_pi.target.position))
        ]
        if session.engaged:
            tracking_error += [_tracking_error(session, result)]
        if result.solve_seconds is not None:
            runtime_ms += [float(units.convert(result.solve_seconds, "s", "ms"))]

    if sink is not None:
        sink.close()

    not_converged = session.workspace.n_not_converged
    if session.teleop is not None:
        not_converged += session.teleop.workspace.n_not_converged
    if not_converged > 0:
        logger.warning(
            f"{not_converged} retargeting solves stopped before convergence "
            f"(scenario '{spec.name}', method '{method}', seed {seed})"
        )

    metrics = MetricsReport(
        scenario=spec.name,
        seed=seed,
        method=method,
        misalignment=scenario.misalignment,
        discontinuity=measure_discontinuity(
            commands, [a.step for a in session.anchors], method=method
        ),
        tracking_error=tracking_error,
        drift=drift,
        target_offset=target_offset,
        solve_runtime_ms=runtime_ms,
        solver_not_converged=not_converged,
    )

    return RolloutResult(
        scenario=scenario,
        commands=commands,
        records=records,
        anchors=list(session.anchors),
        metrics=metrics,
        policy=policy,
        log_path=None if log_path is None else Path(log_path),
    )


# --------------------------------------------------------------------------- #
# Replay                                                                      #
# --------------------------------------------------------------------------- #


class ReplayResult(BaseModel):
    """
    Comparison of a correction log with a fresh rollout.

    Attributes
    ----------
    n_records:
        Number of logged records
    n_mismatches:
        Number of steps whose executed command differs
    first_mismatch:
        First differing step, `None` if every command matches
    """

    n_records: int
    n_mismatches: int
    first_mismatch: Union[int, None] = None

    @property
    def identical(self) -> bool:
        return self.n_mismatches == 0


def replay_correction_log(path: Union[str, Path]) -> ReplayResult:
    """
    Re-run the rollout described by a correction log header and compare the
    executed commands bit for bit.

    Parameters
    ----------
    path:
        Correction log path

    Returns
    -------
    :
        Replay comparison
    """
    content = read_correction_log(path)
    header = content.header
    spec = ScenarioSpec.model_validate(header.scenario)
    config = SimConfig.model_validate(header.config)

    try:
        result = run_rollout(spec, header.method, config, seed=header.seed)
        replayed = result.records
    except RolloutAbortedError as e:
        logger.warning(f"Replay aborted at step {e.step}")
        replayed = []

    mismatches = []
    for i, logged in enumerate(content.records):
        if i >= len(replayed) or replayed[i].executed != logged.executed:
            mismatches += [logged.step]
    if len(replayed) != len(content.records) and not mismatches:
        mismatches += [len(content.records)]

    replay = ReplayResult(
        n_records=len(content.records),
        n_mismatches=len(mismatches),
        first_mismatch=mismatches[0] if mismatches else None,
    )
    if replay.identical:
        logger.info(f"Replay of {path} reproduced {replay.n_records} commands")
    else:
        logger.warning(
            f"Replay of {path} differs on {replay.n_mismatches} steps, first at "
            f"step {replay.first_mismatch}"
        )
    return replay
