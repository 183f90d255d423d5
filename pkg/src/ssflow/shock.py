"""Rankine-Hugoniot jump machinery and shock-absence tests.

Across a discontinuity moving along x = const the jump conditions in
similarity variables read

    1 + V+ = [(gamma-1)(1+V-) + 2 C-^2/(1+V-)] / (gamma+1)
    C+^2   = C-^2 + (gamma-1)/2 * [(1+V-)^2 - (1+V+)^2]
    R+ (1+V+) = R- (1+V-)

Points on the critical lines C^2 = (1+V)^2 are fixed (zero-strength
jumps).  A converging 1-shock is entropy admissible iff the minus state
is below L+ and the plus state above it (strict inequalities).
"""

import math
from dataclasses import dataclass

import numpy as np

from .critical_points import locate_P68
from .fields import f_zero_level
from .ode_engine import IntegratorOptions, integrate_planar
from .params import SimilarityParams


@dataclass(frozen=True)
class JumpState:
    minus: tuple
    plus: tuple
    R_minus: float | None = None
    R_plus: float | None = None


def _jump_VC2(gamma, V_m, C_m):
    w_m = 1.0 + V_m
    w_p = ((gamma - 1.0) * w_m + 2.0 * C_m * C_m / w_m) / (gamma + 1.0)
    C2_p = C_m * C_m + 0.5 * (gamma - 1.0) * (w_m * w_m - w_p * w_p)
    return w_p - 1.0, C2_p


def hugoniot_map(gamma, minus, R_minus=None, sign=None):
    """Post-jump state for a given pre-jump phase point.

    The sign of C+ follows C- (a jump stays in its half-plane); for a
    pre-jump state on the V-axis pass sign=+1 or sign=-1 explicitly
    (default +1, the upper-half convention).
    """
    V_m, C_m = float(minus[0]), float(minus[1])
    if 1.0 + V_m == 0.0:
        raise ValueError("pre-jump state has 1+V = 0")
    V_p, C2_p = _jump_VC2(gamma, V_m, C_m)
    if C2_p < 0.0:
        if C2_p > -1e-12 * max(1.0, C_m * C_m):
            C2_p = 0.0
        else:
            raise ValueError(f"negative post-jump C^2 = {C2_p}")
    if sign is None:
        sign = 1.0 if C_m >= 0.0 else -1.0
    C_p = math.copysign(math.sqrt(C2_p), sign)
    R_p = None
    if R_minus is not None:
        R_p = R_minus * (1.0 + V_m) / (1.0 + V_p)
    return JumpState(minus=(V_m, C_m), plus=(V_p, C_p),
                     R_minus=R_minus, R_plus=R_p)


def post_shock_state(gamma):
    """The image of the origin under the jump map, upper-half sign."""
    return (-2.0 / (gamma + 1.0),
            math.sqrt(2.0 * gamma * (gamma - 1.0)) / (gamma + 1.0))


def lax_check(minus, plus):
    """Entropy admissibility of a converging 1-shock."""
    V_m, C_m = minus
    V_p, C_p = plus
    return (C_m < 1.0 + V_m) and (C_p > 1.0 + V_p)


def guderley_probe(n, gamma, lam, opts=None, p8_radius=1e-6):
    """Shoot from the post-shock state of a quiescent-background flow.

    With kappa = 0 the would-be converging-shock solution must connect
    the post-shock point P+ to the sonic node P8 inside the x < 0
    half-plane, i.e. along the (-G, -F) direction field.  The probe
    integrates that field and reports where the trajectory first meets
    the upper critical line instead (it always does in 0 < lam < 1).
    """
    if not (0.0 < lam < 1.0):
        raise ValueError("probe is defined for 0 < lambda < 1")
    params = SimilarityParams(n=n, gamma=gamma, lam=lam, kappa=0.0)
    opts = opts or IntegratorOptions()
    start = post_shock_state(gamma)

    roots = locate_P68(params)
    V8 = None
    C8 = None
    if roots is not None:
        V8 = roots[1]
        C8 = 1.0 + V8

    level = f_zero_level(params, start[0])
    scenario = "A" if (np.isfinite(level)
                       and start[1] ** 2 > level) else "B"

    events = [("cross_D",),
              ("box", (-5.0, 2.0, 1e-12, 10.0))]
    if V8 is not None:
        events.append(("ball", "P8", (V8, C8), p8_radius))
    traj = integrate_planar(params, start, -1, events, opts)

    reached = traj.termination == "hit_target" and traj.hit == "P8"
    V_cross = None
    if traj.termination == "crossed_Lplus":
        V_cross = float(traj.points[-1, 0])
    return {"first_Lplus_crossing_V": V_cross,
            "reached_P8": reached,
            "scenario": scenario,
            "V8": V8,
            "termination": traj.termination,
            "trajectory": traj}


def hugoniot_locus(params, gamma2_lower):
    """Post-jump images of the inflow curve's lower branch.

    Samples run from the origin downward; the 3-shock convention keeps
    the images in the lower half-plane (below L-).
    """
    pts = np.asarray(gamma2_lower.points, dtype=float)
    gamma = params.gamma
    V_m = pts[:, 0]
    C_m = pts[:, 1]
    w_m = 1.0 + V_m
    w_p = ((gamma - 1.0) * w_m + 2.0 * C_m * C_m / w_m) / (gamma + 1.0)
    C2_p = C_m * C_m + 0.5 * (gamma - 1.0) * (w_m * w_m - w_p * w_p)
    C2_p = np.maximum(C2_p, 0.0)
    H = np.column_stack([w_p - 1.0, -np.sqrt(C2_p)])
    return H


def _segment_intersections(a0, a1, b0, b1):
    """Intersection points between two segment families (chunked)."""
    hits = []
    chunk = 256
    for i0 in range(0, len(a0), chunk):
        A0 = a0[i0:i0 + chunk, None, :]
        A1 = a1[i0:i0 + chunk, None, :]
        d1 = A1 - A0
        d2 = (b1 - b0)[None, :, :]
        diff = b0[None, :, :] - A0
        den = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (diff[..., 0] * d2[..., 1]
                 - diff[..., 1] * d2[..., 0]) / den
            u = (diff[..., 0] * d1[..., 1]
                 - diff[..., 1] * d1[..., 0]) / den
        ok = (np.abs(den) > 0.0) & (t >= 0.0) & (t <= 1.0) \
            & (u >= 0.0) & (u <= 1.0)
        if np.any(ok):
            ia, ib = np.nonzero(ok)
            pt = A0[ia, 0, :] + t[ia, ib, None] * d1[ia, 0, :]
            hits.extend(map(tuple, pt))
    return hits


def shock_detect(params, H, gamma3, exclude_radius=1e-4):
    """Intersection test between the Hugoniot locus and Gamma3.

    Both curves are clipped to the region strictly below L- and to the
    outside of a small disc around P9 (where they meet by construction);
    a surviving crossing would mark a genuine 3-shock state.
    """
    roots = locate_P68(params)
    if roots is None:
        raise ValueError("P8/P9 absent for these parameters")
    V8 = roots[1]
    P9 = np.array([V8, -(1.0 + V8)])

    def clip(pts):
        # segments survive only if both endpoints do, so clipping never
        # fabricates chords across removed stretches
        pts = np.asarray(pts, dtype=float)
        keep = (pts[:, 1] < -(1.0 + pts[:, 0])) \
            & (np.hypot(pts[:, 0] - P9[0],
                        pts[:, 1] - P9[1]) > exclude_radius)
        both = keep[:-1] & keep[1:]
        return pts[:-1][both], pts[1:][both]

    h0, h1 = clip(H)
    g0, g1 = clip(np.asarray(gamma3.points, dtype=float))
    if len(h0) == 0 or len(g0) == 0:
        return {"intersection": None}
    hits = _segment_intersections(h0, h1, g0, g1)
    if not hits:
        return {"intersection": None}
    return {"intersection": hits[0]}


__all__ = [
    "JumpState", "hugoniot_map", "post_shock_state", "lax_check",
    "guderley_probe", "hugoniot_locus", "shock_detect",
]
