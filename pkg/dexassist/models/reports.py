import numpy as np
from pydantic import Field
from scipy import stats

from dexassist.constants import METRICS_SCHEMA_VERSION
from dexassist.models.basemodel import BaseModel


def mean_confidence_interval(
    values: list[float], confidence: float = 0.95
) -> tuple[float, float, float]:
    """
    Mean and two-sided confidence interval. Student-t quantiles are used
    below 30 samples, normal quantiles otherwise.

    Parameters
    ----------
    values:
        Samples
    confidence:
        Confidence level

    Returns
    -------
    :
        (mean, low, high). All `None` without samples.
    """
    n = len(values)
    if n == 0:
        return None, None, None
    x = np.asarray(values, dtype=float)
    mean = float(x.mean())
    if n == 1:
        return mean, mean, mean
    sem = float(x.std(ddof=1)) / np.sqrt(n)
    q = 0.5 + confidence / 2.0
    if n < 30:
        z = float(stats.t.ppf(q, df=n - 1))
    else:
        z = float(stats.norm.ppf(q))
    return mean, mean - z * sem, mean + z * sem


class DiscontinuityReport(BaseModel):
    """
    Hand command jumps at intervention onsets.

    Attributes
    ----------
    method:
        Hand retargeting method
    toggle_steps:
        Control step of each intervention onset
    jumps:
        Joint-space L2 norm of the hand command change across each onset (rad)
    mean:
        Mean jump
    ci_low:
        Lower bound of the 95% confidence interval of the mean
    ci_high:
        Upper bound of the 95% confidence interval of the mean

    Examples
    --------
    ```py
    from dexassist.models import DiscontinuityReport

    report = DiscontinuityReport.from_jumps([0.0, 0.0], [10, 40], method="relative")
    print(report.mean)
    # > 0.0
    ```
    """

    method: str = None
    toggle_steps: list[int] = []
    jumps: list[float] = []
    mean: float = None
    ci_low: float = None
    ci_high: float = None

    @classmethod
    def from_jumps(
        cls, jumps: list[float], toggle_steps: list[int], method: str = None
    ) -> "DiscontinuityReport":
        if any(j < 0 for j in jumps):
            raise ValueError("Jumps must be non-negative.")
        mean, low, high = mean_confidence_interval(jumps)
        return cls(
            method=method,
            toggle_steps=list(toggle_steps),
            jumps=[float(j) for j in jumps],
            mean=mean,
            ci_low=low,
            ci_high=high,
        )


class MetricsReport(BaseModel):
    """
    Metrics of one rollout.

    Attributes
    ----------
    schema_version:
        Metrics schema version
    scenario:
        Scenario name
    seed:
        Scenario seed
    method:
        Hand retargeting method
    misalignment:
        Realized joint-space misalignment of the scenario (rad)
    discontinuity:
        Jumps at intervention onsets
    tracking_error:
        Mean fingertip tracking error after onset at each engaged step (m)
    drift:
        Residual twist norm at each step
    target_offset:
        Distance between the fused arm target and the policy arm target at
        each step (m)
    solve_runtime_ms:
        Hand retargeting runtime at each engaged step (ms)
    solver_not_converged:
        Number of solves that hit the iteration cap or stalled
    """

    schema_version: int = METRICS_SCHEMA_VERSION
    scenario: str = None
    seed: int = None
    method: str = None
    misalignment: float = None
    discontinuity: DiscontinuityReport = DiscontinuityReport()
    tracking_error: list[float] = []
    drift: list[float] = []
    target_offset: list[float] = []
    solve_runtime_ms: list[float] = []
    solver_not_converged: int = 0

    @property
    def series(self) -> dict[str, list[float]]:
        """Plot-ready series keyed by name"""
        series = {
            "jump": self.discontinuity.jumps,
            "toggle_step": [float(s) for s in self.discontinuity.toggle_steps],
            "tracking_error": self.tracking_error,
            "drift": self.drift,
            "target_offset": self.target_offset,
            "solve_runtime_ms": self.solve_runtime_ms,
            "solver_not_converged": [float(self.solver_not_converged)],
        }
        if self.misalignment is not None:
            series["misalignment"] = [self.misalignment]
        return series


class MethodSummary(BaseModel):
    """
    Aggregate of one method over a sweep.

    Attributes
    ----------
    method:
        Hand retargeting method
    n_rollouts:
        Number of rollouts
    discontinuity:
        Jumps pooled over every rollout
    mean_tracking_error:
        Mean post-onset tracking error (m)
    median_solve_ms:
        Median hand retargeting runtime (ms)
    reduction_vs_teleop:
        Relative reduction of the mean jump against direct teleoperation
        switching. `None` if teleop was not part of the sweep.
    seed_reductions:
        Per-seed reduction of the mean jump against direct teleoperation
        switching on the same seed. Empty if teleop was not part of the sweep.
    worst_seed_reduction:
        Smallest per-seed reduction
    fraction_seeds_reduced:
        Fraction of seeds whose reduction reaches `REDUCTION_TARGET`
    """

    method: str
    n_rollouts: int
    discontinuity: DiscontinuityReport
    mean_tracking_error: float = None
    median_solve_ms: float = None
    reduction_vs_teleop: float = None
    seed_reductions: dict[int, float] = Field(default_factory=dict)
    worst_seed_reduction: float = None
    fraction_seeds_reduced: float = None


class SweepReport(BaseModel):
    """
    Sweep over seeds and methods.

    Attributes
    ----------
    schema_version:
        Metrics schema version
    scenario:
        Scenario name
    seeds:
        Seeds run
    summaries:
        Per-method aggregates
    rollouts:
        Per-rollout metrics
    """

    schema_version: int = METRICS_SCHEMA_VERSION
    scenario: str = None
    seeds: list[int] = []
    summaries: list[MethodSummary] = []
    rollouts: list[MetricsReport] = Field(default_factory=list)

    def summary(self, method: str) -> MethodSummary:
        for s in self.summaries:
            if s.method == method:
                return s
        raise KeyError(f"Method '{method}' not found in sweep summaries.")
