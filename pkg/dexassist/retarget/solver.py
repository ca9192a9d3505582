from dataclasses import dataclass
from dataclasses import field
from typing import Callable

import numpy as np

from dexassist._logger import get_logger
from dexassist.exceptions import NonFiniteCostError
from dexassist.models.solverconfig import SolverConfig

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """
    Outcome of one retargeting solve.

    Attributes
    ----------
    q_solution:
        Best iterate, within joint limits (rad)
    cost:
        Total cost at `q_solution`
    iterations:
        Number of accepted iterations
    gradient_norm:
        Projected gradient norm at `q_solution`
    converged:
        `False` when the iteration cap was reached or the line search stalled
    initial_cost:
        Total cost at the projected warm start
    """

    q_solution: np.ndarray
    cost: float
    iterations: int
    gradient_norm: float
    converged: bool
    initial_cost: float = None


@dataclass
class SolverWorkspace:
    """
    Caller-owned scratch reused across the steps of one control stream.
    Solves on distinct workspaces are independent.

    Attributes
    ----------
    history:
        Cost at each iteration of the last solve, when recording is enabled
    n_solves:
        Number of solves run with this workspace
    n_not_converged:
        Number of solves that stopped without converging
    """

    history: list[float] = field(default_factory=list)
    n_solves: int = 0
    n_not_converged: int = 0

    def reset(self) -> None:
        self.history = []
        self.n_solves = 0
        self.n_not_converged = 0


def _projected_gradient(x, g, lower, upper) -> np.ndarray:
    return x - np.clip(x - g, lower, upper)


def minimize_box(
    fun: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    cfg: SolverConfig = None,
    workspace: SolverWorkspace = None,
) -> SolveReport:
    """
    Projected BFGS with backtracking Armijo line search on a box.

    Variables at a bound with the gradient pushing outward are frozen for
    the search direction. Accepted steps never increase the cost.

    Parameters
    ----------
    fun:
        Callable returning the cost and its gradient
    x0:
        Warm start, projected onto the box before use
    lower:
        Lower bounds
    upper:
        Upper bounds
    cfg:
        Solver settings
    workspace:
        Optional scratch receiving cost history and counters

    Returns
    -------
    :
        Solve report with the best iterate
    """
    if cfg is None:
        cfg = SolverConfig()

    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    f, g = fun(x)
    if not np.isfinite(f) or not np.isfinite(g).all():
        raise NonFiniteCostError(f, 0)
    f0 = f

    n = x.shape[0]
    h_inv = np.eye(n)
    scaled = False
    history = [f] if cfg.record_history else None
    converged = False
    iterations = 0

    pg_norm = float(np.linalg.norm(_projected_gradient(x, g, lower, upper)))
    for iterations in range(cfg.max_iter + 1):
        if pg_norm < cfg.grad_tol:
            converged = True
            break
        if iterations == cfg.max_iter:
            break

        frozen = ((x <= lower) & (g > 0)) | ((x >= upper) & (g < 0))
        d = -h_inv @ g
        d[frozen] = 0.0
        if g @ d >= 0.0:
            h_inv = np.eye(n)
            scaled = False
            d = -g.copy()
            d[frozen] = 0.0

        # Backtracking on the projected path
        t = 1.0
        accepted = False
        while t >= cfg.min_step:
            x_new = np.clip(x + t * d, lower, upper)
            s = x_new - x
            f_new, g_new = fun(x_new)
            if not np.isfinite(f_new):
                raise NonFiniteCostError(f_new, iterations + 1)
            if f_new <= f + cfg.armijo_c1 * min(0.0, g @ s):
                accepted = True
                break
            t *= cfg.backtrack

        if not accepted:
            logger.debug(f"Line search stalled at iteration {iterations}")
            break

        y = g_new - g
        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            if not scaled:
                h_inv = (sy / (y @ y)) * np.eye(n)
                scaled = True
            rho = 1.0 / sy
            v = np.eye(n) - rho * np.outer(s, y)
            h_inv = v @ h_inv @ v.T + rho * np.outer(s, s)

        x, f, g = x_new, f_new, g_new
        pg_norm = float(np.linalg.norm(_projected_gradient(x, g, lower, upper)))
        if history is not None:
            history += [f]

        if np.linalg.norm(s) < cfg.step_tol:
            iterations += 1
            converged = True
            break

    if workspace is not None:
        workspace.n_solves += 1
        if not converged:
            workspace.n_not_converged += 1
        if history is not None:
            workspace.history = history

    return SolveReport(
        q_solution=x,
        cost=float(f),
        iterations=iterations,
        gradient_norm=pg_norm,
        converged=converged,
        initial_cost=float(f0),
    )
