"""Distance-dependent gates and the Huber penalty of the retargeting cost."""

import numpy as np

from dexassist.models.costweights import CostWeights


def smoothstep(x):
    """Cubic Hermite step `3x² - 2x³` on `x` clamped to [0, 1]"""
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def gate_beta(d, w: CostWeights):
    """
    Shaping gate. Equals 1 for an open hand and decreases to `beta_min` as
    the thumb-to-finger distance closes.

    Parameters
    ----------
    d:
        Human thumb-to-finger distance (m), scalar or array
    w:
        Cost weights

    Returns
    -------
    :
        Gate value in [beta_min, 1]
    """
    s = smoothstep((np.asarray(d) - w.d_lo) / (w.d_hi - w.d_lo))
    return w.beta_min + (1.0 - w.beta_min) * s


def gate_alpha(d, w: CostWeights):
    """
    Pinch activation. 0 in a deep pinch, 1 for an open hand.

    Parameters
    ----------
    d:
        Human thumb-to-finger distance (m), scalar or array
    w:
        Cost weights

    Returns
    -------
    :
        Activation in [0, 1]
    """
    return smoothstep((np.asarray(d) - w.d_on) / (w.d_off - w.d_on))


def gate_omega(d, w: CostWeights):
    """Grasp weight, `omega_max` in a pinch and 0 for an open hand"""
    return w.omega_max * (1.0 - gate_alpha(d, w))


def huber(x, delta: float):
    """
    Huber penalty of a non-negative residual norm.

    Parameters
    ----------
    x:
        Residual norm, scalar or array
    delta:
        Knee

    Returns
    -------
    :
        `x²/2` below the knee, `δ(x - δ/2)` above
    """
    x = np.asarray(x)
    out = np.where(x <= delta, 0.5 * x * x, delta * (x - 0.5 * delta))
    return out if out.ndim else float(out)


def huber_weight(x, delta: float):
    """
    Gradient factor `ψ` such that `d/dr huber(‖r‖) = ψ(‖r‖) r`.
    """
    x = np.asarray(x)
    return np.where(x <= delta, 1.0, delta / np.maximum(x, delta))
