"""The three scalar fields D, G, F and the chart at infinity.

All evaluators broadcast over numpy arrays.  The F evaluator keeps the
alpha/(1+V) term algebraically cleared when alpha = 0 so the isentropic
case has no removable singularity on V = -1.
"""

import numpy as np

from .params import derive_constants


def eval_FGD(params, V, C):
    """Return (F, G, D) at one or many phase points."""
    dc = derive_constants(params)
    V = np.asarray(V, dtype=float)
    C = np.asarray(C, dtype=float)
    w = 1.0 + V
    D = w * w - C * C
    G = params.n * C * C * (V - dc.V_star) - V * w * (params.lam + V)
    base = C * C - dc.k1 * w * w + dc.k2 * w - dc.k3
    if dc.alpha != 0.0:
        with np.errstate(divide="raise", invalid="raise"):
            base = base + C * C * dc.alpha / w
    F = C * base
    if F.ndim == 0:
        return float(F), float(G), float(D)
    return F, G, D


def eval_F_bracket(params, V, C):
    """The bracket F/C with the overall C factor removed.

    Vanishes exactly on the non-axis part of the F zero level; used for
    event channels and critical-point residuals so points on the V-axis
    do not trivially zero out F.
    """
    dc = derive_constants(params)
    V = np.asarray(V, dtype=float)
    C = np.asarray(C, dtype=float)
    w = 1.0 + V
    base = C * C - dc.k1 * w * w + dc.k2 * w - dc.k3
    if dc.alpha != 0.0:
        base = base + C * C * dc.alpha / w
    if base.ndim == 0:
        return float(base)
    return base


def slope_field(params, V, C):
    """dC/dV = F/G of the autonomous reduction.

    Returns signed infinity where G = 0 and F != 0 (vertical crossing of
    the G zero level).
    """
    F, G, _ = eval_FGD(params, V, C)
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    out = np.empty(np.broadcast(F, G).shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(G != 0.0, F / np.where(G != 0.0, G, 1.0),
                       np.sign(F) * np.inf)
    if out.ndim == 0:
        return float(out)
    return out


def chart_to_WZ(params, V, C):
    """Map (V, C) with C != 0 to the chart at infinity."""
    dc = derive_constants(params)
    V = np.asarray(V, dtype=float)
    C = np.asarray(C, dtype=float)
    if np.any(C == 0.0):
        raise ValueError("chart_to_WZ requires C != 0")
    W = V - dc.V_star
    Z = 1.0 / (C * C)
    if W.ndim == 0:
        return float(W), float(Z)
    return W, Z


def chart_from_WZ(params, W, Z, sign_C=1.0):
    """Inverse chart map; sign_C selects the half-plane."""
    dc = derive_constants(params)
    W = np.asarray(W, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if np.any(Z <= 0.0):
        raise ValueError("chart_from_WZ requires Z > 0")
    V = dc.V_star + W
    C = np.sign(sign_C) / np.sqrt(Z)
    if V.ndim == 0:
        return float(V), float(C)
    return V, C


def g_zero_level(params, V):
    """C^2 on the non-trivial zero level of G, or nan where negative.

    Solving G = 0 for C^2 gives C^2 = V(1+V)(lam+V) / (n(V - V_*)).
    """
    dc = derive_constants(params)
    V = np.asarray(V, dtype=float)
    num = V * (1.0 + V) * (params.lam + V)
    den = params.n * (V - dc.V_star)
    with np.errstate(divide="ignore", invalid="ignore"):
        c2 = num / den
    c2 = np.where(np.isfinite(c2) & (c2 >= 0.0), c2, np.nan)
    if c2.ndim == 0:
        return float(c2)
    return c2


def f_zero_level(params, V):
    """C^2 on the non-axis zero level of F, or nan where negative."""
    dc = derive_constants(params)
    V = np.asarray(V, dtype=float)
    w = 1.0 + V
    num = dc.k1 * w * w - dc.k2 * w + dc.k3
    with np.errstate(divide="ignore", invalid="ignore"):
        den = 1.0 + (dc.alpha / w if dc.alpha != 0.0 else 0.0)
        c2 = num / den
    c2 = np.where(np.isfinite(c2) & (c2 >= 0.0), c2, np.nan)
    if c2.ndim == 0:
        return float(c2)
    return c2


__all__ = [
    "eval_FGD", "eval_F_bracket", "slope_field",
    "chart_to_WZ", "chart_from_WZ", "g_zero_level", "f_zero_level",
]
