from concurrent.futures import ProcessPoolExecutor
from typing import Any

import numpy as np

from dexassist._logger import get_logger
from dexassist._settings import settings
from dexassist.constants import REDUCTION_TARGET
from dexassist.constants import SUPPORTED_METHODS
from dexassist.models.reports import DiscontinuityReport
from dexassist.models.reports import MethodSummary
from dexassist.models.reports import MetricsReport
from dexassist.models.reports import SweepReport
from dexassist.models.scenariospec import ScenarioSpec
from dexassist.models.simconfig import SimConfig
from dexassist.sim.rollout import run_rollout

logger = get_logger(__name__)


def _rollout_metrics(job: tuple[dict, str, dict, int]) -> dict[str, Any]:
    # Worker entry point: arguments and results cross processes as plain dicts
    spec, method, config, seed = job
    result = run_rollout(
        ScenarioSpec.model_validate(spec),
        method,
        SimConfig.model_validate(config),
        seed=seed,
    )
    return result.metrics.model_dump(mode="json")


def summarize_method(
    method: str,
    rollouts: list[MetricsReport],
    teleop_mean: float = None,
    teleop_seed_means: dict[int, float] = None,
) -> MethodSummary:
    """
    Pool the rollouts of one method.

    Parameters
    ----------
    method:
        Hand retargeting method
    rollouts:
        Rollout metrics of the method
    teleop_mean:
        Mean jump of direct teleoperation switching on the same seeds
    teleop_seed_means:
        Mean jump of direct teleoperation switching, per seed

    Returns
    -------
    :
        Method summary
    """
    jumps = []
    steps = []
    tracking = []
    runtime = []
    for r in rollouts:
        jumps += r.discontinuity.jumps
        steps += r.discontinuity.toggle_steps
        tracking += r.tracking_error
        runtime += r.solve_runtime_ms

    discontinuity = DiscontinuityReport.from_jumps(jumps, steps, method=method)
    reduction = None
    if teleop_mean is not None and teleop_mean > 0 and discontinuity.mean is not None:
        reduction = 1.0 - discontinuity.mean / teleop_mean

    seed_reductions = {}
    for r in rollouts:
        base = (teleop_seed_means or {}).get(r.seed)
        if base is None or base <= 0 or r.discontinuity.mean is None:
            continue
        seed_reductions[r.seed] = 1.0 - r.discontinuity.mean / base

    worst = None
    fraction = None
    if seed_reductions:
        values = np.array(list(seed_reductions.values()))
        worst = float(values.min())
        fraction = float(np.mean(values >= REDUCTION_TARGET))
        if worst < REDUCTION_TARGET and method != "teleop":
            logger.warning(
                f"{method}: {int(np.sum(values < REDUCTION_TARGET))} seed(s) below "
                f"a {REDUCTION_TARGET:.0%} jump reduction, worst {worst:.4f}"
            )

    return MethodSummary(
        method=method,
        n_rollouts=len(rollouts),
        discontinuity=discontinuity,
        mean_tracking_error=float(np.mean(tracking)) if tracking else None,
        median_solve_ms=float(np.median(runtime)) if runtime else None,
        reduction_vs_teleop=reduction,
        seed_reductions=seed_reductions,
        worst_seed_reduction=worst,
        fraction_seeds_reduced=fraction,
    )


def run_sweep(
    spec: ScenarioSpec,
    methods: list[str],
    seeds: list[int],
    config: SimConfig = None,
    workers: int = None,
) -> SweepReport:
    """
    Run every (method, seed) rollout of a scenario and summarize per method.
    Each rollout is sequential; rollouts run in parallel worker processes
    when `workers > 1`.

    Parameters
    ----------
    spec:
        Scenario specification
    methods:
        Hand retargeting methods
    seeds:
        Scenario seeds
    config:
        Simulation configuration. Bundled default if `None`.
    workers:
        Number of worker processes. `settings.sweep_workers` if `None`.

    Returns
    -------
    :
        Sweep report
    """
    for m in methods:
        if m not in SUPPORTED_METHODS:
            raise ValueError(
                f"Method '{m}' is not supported. Available: {SUPPORTED_METHODS}"
            )
    if config is None:
        config = SimConfig.load()
    if workers is None:
        workers = settings.sweep_workers

    spec_dump = spec.model_dump(mode="json")
    config_dump = config.model_dump(mode="json")
    jobs = [(spec_dump, m, config_dump, s) for m in methods for s in seeds]
    logger.info(
        f"Sweeping scenario '{spec.name}': {len(methods)} methods x {len(seeds)} "
        f"seeds on {workers} worker(s)"
    )

    dumps = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for i, d in enumerate(executor.map(_rollout_metrics, jobs)):
                dumps += [d]
                logger.debug(f"Sweep progress {i + 1}/{len(jobs)}")
    else:
        for i, job in enumerate(jobs):
            dumps += [_rollout_metrics(job)]
            logger.debug(f"Sweep progress {i + 1}/{len(jobs)}")

    rollouts = [MetricsReport.model_validate(d) for d in dumps]

    teleop_mean = None
    teleop_seed_means = None
    if "teleop" in methods:
        teleop = [r for r in rollouts if r.method == "teleop"]
        teleop_mean = summarize_method("teleop", teleop).discontinuity.mean
        teleop_seed_means = {r.seed: r.discontinuity.mean for r in teleop}

    summaries = []
    for m in methods:
        summaries += [
            summarize_method(
                m,
                [r for r in rollouts if r.method == m],
                teleop_mean=teleop_mean,
                teleop_seed_means=teleop_seed_means,
            )
        ]
        s = summaries[-1]
        logger.info(
            f"{m}: mean jump {s.discontinuity.mean}, reduction vs teleop "
            f"{s.reduction_vs_teleop}, worst seed {s.worst_seed_reduction}"
        )

    return SweepReport(
        scenario=spec.name,
        seeds=list(seeds),
        summaries=summaries,
        rollouts=rollouts,
    )
