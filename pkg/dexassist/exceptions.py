class DimensionMismatchError(ValueError):
    def __init__(self, message="Dimension mismatch", name=None, expected=None, got=None):
        if name is not None:
            message = f"Dimension mismatch for '{name}': expected {expected}, got {got}"
        super().__init__(message)


class So3DomainError(ValueError):
    def __init__(self, angle: float, max_angle: float):
        message = (
            f"Rotation angle {angle:.9f} rad is outside the principal branch of the "
            f"SO(3) log map (max {max_angle:.9f} rad)"
        )
        super().__init__(message)


class InvalidFingerError(IndexError):
    def __init__(self, finger: int, n_fingers: int = None):
        message = f"Finger index {finger} is not a valid non-thumb finger"
        if n_fingers is not None:
            message += f" (model has {n_fingers} chains, thumb is 0)"
        super().__init__(message)


class NonFiniteCostError(ArithmeticError):
    def __init__(self, cost: float, iteration: int = None):
        message = f"Retargeting cost is not finite ({cost})"
        if iteration is not None:
            message += f" at iteration {iteration}"
        super().__init__(message)


class ToggleOutOfRangeError(ValueError):
    def __init__(self, step: int, first: int, last: int):
        message = (
            f"Toggle at step {step} is not covered by the command log "
            f"(steps {first} to {last}, the step before each toggle is required)"
        )
        super().__init__(message)


class CorrectionLogError(IOError):
    def __init__(self, message="Correction log failure", path=None):
        if path is not None:
            message = f"{message} | {path}"
        super().__init__(message)


class RolloutAbortedError(RuntimeError):
    def __init__(self, step: int, reason: str, method: str = None):
        message = f"Rollout aborted at step {step}"
        if method:
            message += f" with method '{method}'"
        message += f" | {reason}"
        self.step = step
        self.reason = reason
        super().__init__(message)
