"""Construction of the global solution curve.

Pieces, in traversal order of the physical similarity variable x:

  gamma1        from the point at infinity into the sonic node P8 (x < 0)
  gamma2 upper  P8 down to the origin P1 (x in (-1, 0))
  gamma2 lower  mirror branch from P1 out to P9 (x in (0, x9))
  gamma3        mirror of gamma1 continuing from P9 (x > x9)

The one free departure parameter at the node P8 is fixed by bisection on
the arrival slope at the origin; the admissible slopes are bounded away
from zero by the separatrix slopes (delta = max(zeta, eps)).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels as K
from .critical_points import classify_infinity, locate_P4
from .errors import ConstructionError
from .fields import chart_from_WZ
from .local_analysis import node_data_P8
from .ode_engine import (IntegratorOptions, Trajectory, concat,
                         integrate_planar, integrate_wz, x_parameterize)
from .params import derive_constants, param_vector

# Ball ladders.  The node ladder is decade-spaced because the arrival
# slope converges like a power of the radius and geometric radii make
# the error sequence geometric (Aitken-friendly).  The origin ladder is
# half-decade spaced and starts high so the quadrature of d ln|x| gets
# well-resolved samples through the region where it grows like 1/rho.
P8_LADDER = tuple(10.0 ** -k for k in range(4, 10))
ORIGIN_LADDER = tuple(10.0 ** (-k / 2.0) for k in range(2, 19))
FAN_OFFSET = 1e-6
SEP_OFFSET = 1e-5


@dataclass
class SeparatrixSet:
    theta: Trajectory
    phi: Trajectory
    psi: Trajectory
    gamma_s: Trajectory
    zeta: float
    eps: float
    delta: float
    theta_angle: float      # departure-circle angle of Theta at P8
    l2_angle: float         # departure-circle angle of the L2 direction
    eps_nonnegative: bool


@dataclass
class SolutionCurve:
    params: object
    gamma1: Trajectory
    gamma2_upper: Trajectory
    gamma2_lower: Trajectory
    gamma3: Trajectory
    x8: float
    x9: float
    s_origin: float
    nu: float
    omega: float
    node: object
    separatrices: SeparatrixSet
    xs: np.ndarray
    Vs: np.ndarray
    Cs: np.ndarray
    origin_index: int
    info: dict


def _away_direction(params, chart_code, center, start):
    """Field direction (+-1) that moves away from a critical point."""
    pv = param_vector(params)
    f0, f1 = K.field_raw(chart_code, 1,
                         pv[0], pv[1], pv[2], pv[3], pv[4], pv[5], pv[6],
                         start[0], start[1])
    rad = f0 * (start[0] - center[0]) + f1 * (start[1] - center[1])
    return 1 if rad > 0.0 else -1


# Crossings below this radius are excluded from angle and ratio
# extrapolations: the absolute position error of the integrator divided
# by the radius overtakes the truncation term there.
EXTRAP_FLOOR = 3e-7


def _origin_angle(crossings):
    """Extrapolated polar angle of an origin-bound trajectory.

    The angle converges linearly in the radius at a star node; one
    Richardson step over two ball crossings removes the leading term.
    Crossings at very small radii are skipped (noise amplification).
    """
    usable = [c for c in crossings if c[0] >= EXTRAP_FLOOR]
    if len(usable) < 2:
        usable = crossings
    if len(usable) < 2:
        raise ConstructionError("too few origin crossings for the slope")
    (r1, p1), (r2, p2) = usable[-2], usable[-1]
    a1 = math.atan2(p1[1], p1[0])
    a2 = math.atan2(p2[1], p2[0])
    q = r1 / r2
    return (q * a2 - a1) / (q - 1.0)


def _slope_of_angle(angle):
    c = math.cos(angle)
    if abs(c) < 1e-15:
        return math.inf
    return math.tan(angle)


def _p8_arrival_slope(nd, crossings):
    """Slope at which a trajectory meets P8.

    Raw crossing slopes converge like radius^beta with the approach
    exponent beta = (E2 - E1)/E1, small at a stiff node; two Richardson
    passes with that exponent over decade radii reach the 1e-3
    comparison with L1.
    """
    from .local_analysis import approach_exponent, richardson_known
    slopes = []
    rads = []
    for r, (V, C) in crossings:
        dv = V - nd.V8
        if dv == 0.0:
            continue
        slopes.append((C - nd.C8) / dv)
        rads.append(r)
    if len(slopes) < 3:
        raise ConstructionError("too few P8 crossings for the slope")
    return richardson_known(slopes, rads, approach_exponent(nd),
                            passes=2)[-1]


def _ladder_approach(params, start, direction, center, radii, opts,
                     events, shrink=False):
    """approach_point with per-leg step caps for quadrature accuracy."""
    segs = []
    crossings = []
    cur = tuple(start)
    prev_r = math.hypot(cur[0] - center[0], cur[1] - center[1])
    for r in sorted(radii, reverse=True):
        if r >= prev_r:
            continue
        leg_opts = opts
        if shrink:
            leg_opts = replace(opts,
                               max_step=min(opts.max_step, 0.3 * prev_r))
        t = integrate_planar(params, cur, direction,
                             list(events) + [("ball", "target", center, r)],
                             leg_opts)
        segs.append(t)
        if t.termination != "hit_target" or t.hit != "target":
            break
        cur = t.end()
        crossings.append((r, cur))
        prev_r = r
    return concat(segs), crossings


def build_gamma1(params, opts=None, wz_offset=1e-6):
    """Inflow trajectory from the point at infinity to the node P8.

    Starts in the WZ chart at the given offset along the saddle
    eigen-line, hands over to the VC chart once C has dropped to a few
    multiples of C8, then runs a shrinking-ball ladder into P8.
    """
    opts = opts or IntegratorOptions()
    nd = node_data_P8(params)
    if nd.L1 is None or not nd.node:
        raise ConstructionError("P8 is not a node; gamma1 undefined")
    inf = classify_infinity(params)
    if not inf["saddle"] or inf["degenerate"]:
        raise ConstructionError("point at infinity is not a saddle")
    dc = derive_constants(params)

    slope = inf["eigen_slope"]
    nrm = math.hypot(1.0, slope)
    start = (wz_offset / nrm, wz_offset * slope / nrm)
    d = _away_direction(params, 1, (0.0, 0.0), start)
    C_cross = 3.0 * nd.C8
    Z_cross = 1.0 / (C_cross * C_cross)
    wz_box = (-1e-3, 1.0, -1.0, Z_cross)
    wz = integrate_wz(params, start, d,
                      [("cross_D",), ("box", wz_box)], opts)
    if wz.termination == "crossed_Lplus":
        return {"reached_P8": False, "traj_wz": wz, "traj_vc": None,
                "arrival_slope": None, "crossings": [],
                "failure": "crossed_Lplus", "wz_offset": wz_offset}
    if wz.termination != "left_domain" or wz.points[-1, 1] < 0.9 * Z_cross:
        raise ConstructionError(
            f"WZ leg ended unexpectedly: {wz.termination}")

    seam = chart_from_WZ(params, wz.points[-1, 0], wz.points[-1, 1], 1.0)
    vc_box = (dc.V_star - 0.2, nd.V8 + 0.2, 0.0, C_cross + 1.0)
    # the ladder legs run at the double-precision floor regardless of the
    # requested tolerances: the deep crossings feed radius-amplified
    # extrapolations (arrival slope, A8 secants)
    ladder_opts = replace(opts,
                          rel_tol=min(opts.rel_tol, 1e-13),
                          abs_tol=min(opts.abs_tol, 1e-15),
                          event_tol=min(opts.event_tol, 1e-15))
    vc, crossings = _ladder_approach(
        params, seam, d, (nd.V8, nd.C8), P8_LADDER, ladder_opts,
        [("cross_D",), ("box", vc_box)])
    reached = bool(crossings) and crossings[-1][0] <= min(P8_LADDER)
    failure = None
    arrival = None
    if reached:
        arrival = _p8_arrival_slope(nd, crossings)
    else:
        failure = vc.termination
    return {"reached_P8": reached, "traj_wz": wz, "traj_vc": vc,
            "arrival_slope": arrival, "crossings": crossings,
            "failure": failure, "wz_offset": wz_offset, "direction": d}


def _fd_jacobian(params, point, h=1e-7):
    """Central finite-difference Jacobian of the raw (G, F) field."""
    pv = param_vector(params)

    def f(a, b):
        return K.field_raw(0, 1, pv[0], pv[1], pv[2], pv[3], pv[4],
                           pv[5], pv[6], a, b)

    V, C = point
    gp, fp = f(V + h, C)
    gm, fm = f(V - h, C)
    col1 = ((gp - gm) / (2 * h), (fp - fm) / (2 * h))
    gp, fp = f(V, C + h)
    gm, fm = f(V, C - h)
    col2 = ((gp - gm) / (2 * h), (fp - fm) / (2 * h))
    return np.array([[col1[0], col2[0]], [col1[1], col2[1]]])


def build_separatrices(params, opts=None):
    """The saddle connections bounding the admissible origin slopes.

    Theta joins P8 to the saddle P4 (traced backward from P4); Phi joins
    P4 to the origin; Psi is Phi's mirror; the secondary-direction
    departure from P8 hugs the V-axis into the origin and its slope eps
    is the smallest admissible positive arrival slope.
    """
    opts = opts or IntegratorOptions()
    nd = node_data_P8(params)
    if nd.L1 is None:
        raise ConstructionError("node data unavailable")
    p4 = locate_P4(params)
    P4 = (p4.V, p4.C)
    P8 = (nd.V8, nd.C8)

    J = _fd_jacobian(params, P4)
    eigvals, eigvecs = np.linalg.eig(J)
    if np.iscomplexobj(eigvals) and np.any(np.abs(eigvals.imag) > 1e-12):
        raise ConstructionError("P4 eigen-solve returned complex pair")
    eigvals = eigvals.real
    eigvecs = eigvecs.real
    if not (eigvals.min() < 0.0 < eigvals.max()):
        raise ConstructionError("P4 is not a saddle of the field")
    v_stable = eigvecs[:, int(np.argmin(eigvals))]
    v_unstable = eigvecs[:, int(np.argmax(eigvals))]

    # Theta: stable branch pointing toward P8, traced against the flow.
    u = v_stable / np.linalg.norm(v_stable)
    if u[0] * (P8[0] - P4[0]) + u[1] * (P8[1] - P4[1]) < 0.0:
        u = -u
    start = (P4[0] + SEP_OFFSET * u[0], P4[1] + SEP_OFFSET * u[1])
    d = _away_direction(params, 0, P4, start)
    box = (-1.5, nd.V8 + 0.3, -0.1, 4.0 * nd.C8)
    theta_radii = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, FAN_OFFSET]
    theta, th_cross = _ladder_approach(params, start, d, P8, theta_radii,
                                       opts, [("box", box)])
    if not th_cross or th_cross[-1][0] > FAN_OFFSET:
        raise ConstructionError("Theta did not reach the P8 circle")
    tp = th_cross[-1][1]
    theta_angle = math.atan2(tp[1] - nd.C8, tp[0] - nd.V8)

    # Phi: unstable branch pointing toward the origin, with the flow.
    u = v_unstable / np.linalg.norm(v_unstable)
    if u[0] * (-P4[0]) + u[1] * (-P4[1]) < 0.0:
        u = -u
    start = (P4[0] + SEP_OFFSET * u[0], P4[1] + SEP_OFFSET * u[1])
    d = _away_direction(params, 0, P4, start)
    phi, phi_cross = _ladder_approach(params, start, d, (0.0, 0.0),
                                      ORIGIN_LADDER, opts,
                                      [("box", box)], shrink=True)
    if not phi_cross or phi_cross[-1][0] > min(ORIGIN_LADDER):
        raise ConstructionError("Phi did not reach the origin")
    phi_angle = _origin_angle(phi_cross)
    zeta = -_slope_of_angle(phi_angle)
    psi = phi.reflect()

    # Secondary-direction departure from P8.
    l2_angle = math.atan2(nd.L2, 1.0)
    start = (nd.V8 + FAN_OFFSET * math.cos(l2_angle),
             nd.C8 + FAN_OFFSET * math.sin(l2_angle))
    d = _away_direction(params, 0, P8, start)
    gs, gs_cross = _ladder_approach(params, start, d, (0.0, 0.0),
                                    ORIGIN_LADDER, opts,
                                    [("box", box)], shrink=True)
    if not gs_cross or gs_cross[-1][0] > min(ORIGIN_LADDER):
        raise ConstructionError("secondary departure missed the origin")
    eps = _slope_of_angle(_origin_angle(gs_cross))

    return SeparatrixSet(theta=theta, phi=phi, psi=psi, gamma_s=gs,
                         zeta=zeta, eps=eps, delta=max(zeta, eps),
                         theta_angle=theta_angle, l2_angle=l2_angle,
                         eps_nonnegative=eps >= 0.0)


# Starting pad past the measured Theta angle; widened adaptively until
# the t=0 fan member actually overshoots the origin (the traced Theta
# angle carries an offset-sized error).
THETA_PAD = 3e-6
# Guard ball at P4: only trajectories riding the separatrix into the
# saddle should trip it, so it must sit far below the passing distance
# of the steep fan members.
P4_GUARD = 1e-12


def depart_P8(params, t, opts=None, nd=None, sep=None, pad=THETA_PAD):
    """One member of the departure fan at P8, toward the origin.

    t in (0, 1) sweeps the departure-circle angle from just past Theta
    (t=0, trajectories miss the origin on the far side) to the secondary
    direction (t=1, slope eps).  Returns the trajectory, the origin
    crossings, the extrapolated arrival angle (None on a miss) and the
    arrival slope.
    """
    opts = opts or IntegratorOptions()
    nd = nd or node_data_P8(params)
    if sep is None:
        raise ValueError("depart_P8 needs the separatrix set")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    left = sep.theta_angle - pad
    angle = left + t * (sep.l2_angle - left)
    P8 = (nd.V8, nd.C8)
    start = (nd.V8 + FAN_OFFSET * math.cos(angle),
             nd.C8 + FAN_OFFSET * math.sin(angle))
    d = _away_direction(params, 0, P8, start)
    p4 = locate_P4(params)
    box = (-1.5, nd.V8 + 0.3, -0.1, 4.0 * nd.C8)
    traj, crossings = _ladder_approach(
        params, start, d, (0.0, 0.0), ORIGIN_LADDER, opts,
        [("cross_D",), ("box", box),
         ("ball", "P4", (p4.V, p4.C), P4_GUARD)],
        shrink=True)
    if not crossings or crossings[-1][0] > min(ORIGIN_LADDER):
        return {"traj": traj, "crossings": crossings, "phi_angle": None,
                "s": None, "angle": angle}
    phi_angle = _origin_angle(crossings)
    return {"traj": traj, "crossings": crossings, "phi_angle": phi_angle,
            "s": _slope_of_angle(phi_angle), "angle": angle}


def _target_angle(s_target):
    """Arrival polar angle at the origin for a requested slope."""
    if math.isinf(s_target):
        return 0.5 * math.pi
    if s_target > 0.0:
        return math.atan(s_target)
    return math.pi + math.atan(s_target)


def _fan_pad(params, opts, nd, sep):
    """Widen the Theta-side pad until the t=0 member misses the origin.

    The arrival angle blows through the vertical within an angular
    boundary layer much thinner than the accuracy of the traced Theta
    angle, so the fan's left edge must be located by trial: keep
    stepping past the estimate until the departure overshoots (no origin
    arrival, or an arrival beyond the opposite separatrix slope).
    """
    pad = THETA_PAD
    for _ in range(16):
        r = depart_P8(params, 0.0, opts, nd, sep, pad=pad)
        phi = r["phi_angle"]
        if phi is None or phi > 2.0:
            return pad
        pad *= 4.0
    raise ConstructionError("could not bracket the Theta side of the fan")


def _bisect_fan(params, phi_star, opts, nd, sep, tol_angle, pad):
    """Bisection on the departure parameter for a given arrival angle.

    The arrival angle decreases monotonically as the departure angle
    sweeps from the Theta side toward the secondary direction; misses on
    the Theta side are treated as angle pi.
    """
    t_lo, t_hi = 0.0, 1.0
    r_hi = depart_P8(params, t_hi, opts, nd, sep, pad=pad)
    phi_hi = r_hi["phi_angle"] if r_hi["phi_angle"] is not None else 0.0
    if phi_hi > phi_star:
        raise ConstructionError("requested slope below the fan range")
    best = None
    for _ in range(80):
        t_mid = 0.5 * (t_lo + t_hi)
        r = depart_P8(params, t_mid, opts, nd, sep, pad=pad)
        phi = r["phi_angle"] if r["phi_angle"] is not None else math.pi
        if r["phi_angle"] is not None:
            if best is None or (abs(phi - phi_star)
                                < abs(best["phi_angle"] - phi_star)):
                best = r
                best["t"] = t_mid
            if abs(phi - phi_star) <= tol_angle:
                return best
        if phi > phi_star:
            t_lo = t_mid
        else:
            t_hi = t_mid
        if t_hi - t_lo < 1e-16:
            break
    accept = max(100.0 * tol_angle, 1e-5)
    if best is None or abs(best["phi_angle"] - phi_star) > accept:
        raise ConstructionError(
            "fan bisection did not reach the requested arrival slope")
    return best


def build_gamma2(params, s_target=math.inf, opts=None, nd=None, sep=None):
    """The branch pair through the origin with prescribed arrival slope.

    The upper branch runs P8 -> P1 with slope s_target at the origin;
    the lower branch is the mirror of the fan member with slope
    -s_target, so slope continuity through the origin is automatic.
    """
    opts = opts or IntegratorOptions()
    nd = nd or node_data_P8(params)
    sep = sep or build_separatrices(params, opts)
    if not math.isinf(s_target) and abs(s_target) <= sep.delta * (1 + 1e-3):
        raise ConstructionError(
            f"|s_target| must exceed delta={sep.delta:.6g} "
            "(separatrix-bounded)")

    pad = _fan_pad(params, opts, nd, sep)
    phi_up = _target_angle(s_target)
    tol = max(1e-9, 1e-6 * abs(math.sin(phi_up) * math.cos(phi_up)))
    upper = _bisect_fan(params, phi_up, opts, nd, sep, tol, pad)

    if math.isinf(s_target):
        lower_src = upper
    else:
        phi_lo = _target_angle(-s_target)
        tol2 = max(1e-9, 1e-6 * abs(math.sin(phi_lo) * math.cos(phi_lo)))
        lower_src = _bisect_fan(params, phi_lo, opts, nd, sep, tol2, pad)

    return {"upper": upper, "lower_src": lower_src,
            "s_upper": upper["s"], "s_lower_src": lower_src["s"],
            "s_target": s_target, "sep": sep, "nd": nd}


def _richardson_ratio(crossings, xs_at, which):
    """Extrapolated limit of (coordinate / x) over the ladder crossings.

    The ratio converges linearly in the crossing radius.
    """
    vals = []
    radii = []
    for (r, p), x in zip(crossings, xs_at):
        if x == 0.0 or r < EXTRAP_FLOOR:
            continue
        vals.append(p[which] / x)
        radii.append(r)
    if len(vals) < 2:
        raise ConstructionError("too few crossings for the origin limits")
    q = radii[-2] / radii[-1]
    return (q * vals[-1] - vals[-2]) / (q - 1.0)


def _x_at_crossings(traj, crossings):
    pts = traj.points
    out = []
    for _, p in crossings:
        i = int(np.argmin(np.hypot(pts[:, 0] - p[0], pts[:, 1] - p[1])))
        out.append(float(traj.x[i]))
    return out


def _anchor_near_P8(params, traj, nd):
    """x at the first sample of a P8 departure, with x8 = -1 at P8.

    The log-x integrand is finite at the node, so the short hop from P8
    to the offset start contributes integrand * offset to ln|x|.
    """
    from .ode_engine import _log_x_integrand
    integ0 = float(_log_x_integrand(params, traj)[0])
    dist0 = math.hypot(traj.points[0, 0] - nd.V8,
                       traj.points[0, 1] - nd.C8)
    return -math.exp(integ0 * dist0)


def assemble(params, g1, g2, opts=None):
    """Glue the pieces, attach x, and validate the global curve."""
    opts = opts or IntegratorOptions()
    if not g1["reached_P8"]:
        raise ConstructionError("gamma1 did not reach P8")
    nd = g2["nd"]
    sep = g2["sep"]
    dc = derive_constants(params)

    # gamma1: anchor x = -1 at the P8 end, chain into the WZ leg.
    vc = g1["traj_vc"]
    vc_x = x_parameterize(params, vc, (len(vc.s) - 1, -1.0))
    wz = g1["traj_wz"]
    wz_x = x_parameterize(params, wz, (len(wz.s) - 1, float(vc_x.x[0])),
                          singular_centers=((0.0, 0.0),))

    wzV = dc.V_star + wz.points[:, 0]
    wzC = 1.0 / np.sqrt(wz.points[:, 1])
    g1_pts = np.vstack([np.column_stack([wzV, wzC]), vc.points[1:]])
    g1_x = np.concatenate([wz_x.x, vc_x.x[1:]])
    g1_s = np.concatenate([wz.s, wz.s[-1] + vc.s[1:]])
    gamma1 = Trajectory(chart="VC", s=g1_s, points=g1_pts,
                        direction=vc.direction,
                        termination=vc.termination, hit=vc.hit, x=g1_x)
    if not np.all(np.diff(gamma1.x) > 0.0):
        raise ConstructionError("gamma1 x-parameterization not monotone")

    # gamma2 upper: anchored just past P8, origin limits by Richardson.
    up = g2["upper"]
    up_t = up["traj"]
    up_x = x_parameterize(params, up_t,
                          (0, _anchor_near_P8(params, up_t, nd)),
                          singular_centers=((0.0, 0.0),))
    xs_up = _x_at_crossings(up_x, up["crossings"])
    nu = _richardson_ratio(up["crossings"], xs_up, 0)
    omega = _richardson_ratio(up["crossings"], xs_up, 1)
    if omega >= 0.0:
        raise ConstructionError("omega must be negative (c >= 0)")

    # Lower branch: mirror of its fan member, x scaled so the sound
    # speed slope omega is continuous across x = 0 (slope continuity is
    # supplied by the fan target; omega continuity then also matches nu).
    lo = g2["lower_src"]
    lo_t = lo["traj"]
    lo_x = x_parameterize(params, lo_t,
                          (0, _anchor_near_P8(params, lo_t, nd)),
                          singular_centers=((0.0, 0.0),))
    xs_lo = _x_at_crossings(lo_x, lo["crossings"])
    nu_lo = _richardson_ratio(lo["crossings"], xs_lo, 0)
    omega_lo = _richardson_ratio(lo["crossings"], xs_lo, 1)
    if (nu == 0.0) != (nu_lo == 0.0):
        raise ConstructionError("nu vanishes on one side of x=0 only")
    b = omega_lo / omega
    if b <= 0.0:
        raise ConstructionError("lower-branch x-scale came out negative")

    lower_pts = lo_t.points[::-1].copy()
    lower_pts[:, 1] = -lower_pts[:, 1]
    lower_x = b * np.abs(lo_x.x[::-1])
    lower_s = lo_t.s[-1] - lo_t.s[::-1]
    gamma2_lower = Trajectory(chart="VC", s=lower_s, points=lower_pts,
                              direction=lo_t.direction,
                              termination="hit_target", hit="P9",
                              x=lower_x)
    x9 = float(lower_x[-1])

    # gamma3: mirror of gamma1, scale tied through x9 at P9.
    g3_pts = gamma1.points[::-1].copy()
    g3_pts[:, 1] = -g3_pts[:, 1]
    g3_x = x9 * np.abs(gamma1.x[::-1])
    gamma3 = Trajectory(chart="VC", s=gamma1.s[-1] - gamma1.s[::-1],
                        points=g3_pts, direction=gamma1.direction,
                        termination="left_domain", hit=None, x=g3_x)

    s_origin = up["s"]

    # Global sample table with a single strictly increasing x column.
    xs = [gamma1.x, up_x.x, np.array([0.0]), lower_x, g3_x]
    Vs = [gamma1.points[:, 0], up_t.points[:, 0], np.array([0.0]),
          lower_pts[:, 0], g3_pts[:, 0]]
    Cs = [gamma1.points[:, 1], up_t.points[:, 1], np.array([0.0]),
          lower_pts[:, 1], g3_pts[:, 1]]
    xs = np.concatenate(xs)
    Vs = np.concatenate(Vs)
    Cs = np.concatenate(Cs)
    keep = np.concatenate([[True], np.diff(xs) > 0.0])
    xs, Vs, Cs = xs[keep], Vs[keep], Cs[keep]
    origin_index = int(np.searchsorted(xs, 0.0))
    if xs[origin_index] != 0.0:
        raise ConstructionError("origin row lost in the merge")
    off = (xs != 0.0)
    if np.any(np.sign(xs[off]) * np.sign(Cs[off]) != -1.0):
        raise ConstructionError("sign pattern sign(x)*sign(C) = -1 broken")

    gamma2_upper = Trajectory(chart="VC", s=up_t.s, points=up_t.points,
                              direction=up_t.direction,
                              termination="hit_target", hit="P1",
                              x=up_x.x)

    info = {
        "arrival_slope_gamma1": g1["arrival_slope"],
        "s_upper": up["s"], "s_lower_src": lo["s"],
        "t_upper": up.get("t"), "t_lower": lo.get("t"),
        "nu_lower": -nu_lo / b,
        "b_scale": b, "wz_offset": g1["wz_offset"],
    }
    return SolutionCurve(params=params, gamma1=gamma1,
                         gamma2_upper=gamma2_upper,
                         gamma2_lower=gamma2_lower, gamma3=gamma3,
                         x8=-1.0, x9=x9, s_origin=s_origin, nu=nu,
                         omega=omega, node=nd, separatrices=sep,
                         xs=xs, Vs=Vs, Cs=Cs, origin_index=origin_index,
                         info=info)


__all__ = [
    "SeparatrixSet", "SolutionCurve", "build_gamma1",
    "build_separatrices", "depart_P8", "build_gamma2", "assemble",
    "P8_LADDER", "ORIGIN_LADDER", "FAN_OFFSET",
]
