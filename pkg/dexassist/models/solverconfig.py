from pydantic import Field

from dexassist.models.basemodel import BaseModel


class SolverConfig(BaseModel):
    """
    Projected quasi-Newton solver settings.

    Attributes
    ----------
    max_iter:
        Iteration cap. Reaching it returns the best iterate flagged as not
        converged.
    grad_tol:
        Convergence threshold on the projected gradient norm
    step_tol:
        Convergence threshold on the accepted step norm
    armijo_c1:
        Sufficient decrease constant of the line search
    backtrack:
        Step shrink factor of the line search
    min_step:
        Smallest line search step before giving up
    record_history:
        Record the cost at every iteration in the solver workspace
    """

    max_iter: int = Field(50, ge=1)
    grad_tol: float = Field(1e-8, gt=0.0)
    step_tol: float = Field(1e-10, gt=0.0)
    armijo_c1: float = Field(1e-4, gt=0.0, lt=1.0)
    backtrack: float = Field(0.5, gt=0.0, lt=1.0)
    min_step: float = Field(1e-12, gt=0.0)
    record_history: bool = False


class BaselineConfig(BaseModel):
    """
    Baseline retargeters settings.

    Attributes
    ----------
    damping:
        Damped least squares factor of the Jacobian mapping (m)
    """

    damping: float = Field(1e-3, gt=0.0)
