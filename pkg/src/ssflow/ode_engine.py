"""Event-driven integration of the similarity ODEs in two charts.

The heavy lifting happens in _kernels.integrate_core; this module owns
the Trajectory record, event-spec translation, chart bookkeeping and the
x-parameterization quadrature.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels as K
from .params import param_vector


@dataclass
class IntegratorOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.01
    event_tol: float = 1e-12
    stop_radius: float = 1e-7
    step_floor: float = 1e-14
    max_steps: int = 400000
    s_max: float = 60.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "event_tol",
                     "stop_radius", "step_floor", "s_max"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    def halved(self):
        return replace(self, rel_tol=self.rel_tol / 2.0,
                       abs_tol=self.abs_tol / 2.0,
                       event_tol=self.event_tol / 2.0,
                       stop_radius=self.stop_radius / 2.0)


@dataclass
class Trajectory:
    chart: str                      # "VC" or "WZ"
    s: np.ndarray                   # integration parameter, increasing
    points: np.ndarray              # (N, 2) chart coordinates
    direction: int                  # +-1, sense relative to the raw field
    termination: str
    hit: str | None = None          # ball name or crossed line label
    x: np.ndarray | None = None

    def end(self):
        return float(self.points[-1, 0]), float(self.points[-1, 1])

    def reflect(self):
        """Mirror across the V-axis (VC chart only)."""
        if self.chart != "VC":
            raise ValueError("reflection is defined in the VC chart")
        pts = self.points.copy()
        pts[:, 1] = -pts[:, 1]
        return Trajectory(chart=self.chart, s=self.s.copy(), points=pts,
                          direction=self.direction,
                          termination=self.termination, hit=self.hit,
                          x=None if self.x is None else self.x.copy())


def rhs_x(params, x, p):
    """Right-hand side of the non-autonomous system in x."""
    from .fields import eval_FGD
    if x == 0.0:
        raise ValueError("x = 0 is the collapse locus, not integrable")
    F, G, D = eval_FGD(params, p[0], p[1])
    if D == 0.0:
        raise ValueError("D = 0: singular point of the x-system")
    den = params.lam * x * D
    return (-G / den, -F / den)


_TERMINATION = {
    K.STATUS_SMAX: "left_domain",
    K.STATUS_BOX: "left_domain",
    K.STATUS_STEP_FLOOR: "step_floor",
    K.STATUS_MAX_STEPS: "max_steps",
}

_DEFAULT_BOX = (-1e6, 1e6, -1e6, 1e6)


def _run(params, chart_code, start, direction, events, opts):
    pv = param_vector(params)
    stops = []
    names = []
    box = list(_DEFAULT_BOX)
    watch = np.zeros(3, dtype=np.int64)
    for ev in events:
        tag = ev[0]
        if tag == "ball":
            _, name, center, radius = ev
            stops.append((center[0], center[1], radius))
            names.append(name)
        elif tag == "cross_D":
            watch[K.CHANNEL_D] = 1
        elif tag == "cross_G":
            watch[K.CHANNEL_G] = 1
        elif tag == "cross_F":
            watch[K.CHANNEL_F] = 1
        elif tag == "box":
            box = list(ev[1])
        else:
            raise ValueError(f"unknown event spec {tag!r}")
    stops_arr = (np.array(stops, dtype=float) if stops
                 else np.zeros((0, 3)))
    box_arr = np.array(box, dtype=float)

    out, svals, nsamp, status, hit = K.integrate_core(
        chart_code, direction,
        pv[0], pv[1], pv[2], pv[3], pv[4], pv[5], pv[6],
        float(start[0]), float(start[1]),
        opts.s_max, opts.max_step, opts.rel_tol, opts.abs_tol,
        opts.event_tol, opts.step_floor,
        stops_arr, box_arr, watch, opts.max_steps)

    pts = out[:nsamp].copy()
    s = svals[:nsamp].copy()
    if status == K.STATUS_BALL:
        term, hit_name = "hit_target", names[hit]
    elif status == K.STATUS_SIGN:
        if hit == K.CHANNEL_D:
            V, C = pts[-1]
            if chart_code == 1:
                from .params import derive_constants
                V = derive_constants(params).V_star + V
                C = 1.0 / math.sqrt(max(pts[-1, 1], 1e-300))
            if abs(C - (1.0 + V)) <= abs(C + (1.0 + V)):
                term, hit_name = "crossed_Lplus", None
            else:
                term, hit_name = "crossed_Lminus", None
        elif hit == K.CHANNEL_G:
            term, hit_name = "crossed_G", None
        else:
            term, hit_name = "crossed_F", None
    else:
        term, hit_name = _TERMINATION[status], None
    return Trajectory(chart="VC" if chart_code == 0 else "WZ",
                      s=s, points=pts, direction=direction,
                      termination=term, hit=hit_name)


def integrate_planar(params, start, direction, events, opts=None):
    """Arclength-normalized integration in the (V, C) plane."""
    opts = opts or IntegratorOptions()
    return _run(params, 0, start, direction, events, opts)


def integrate_wz(params, start, direction, events, opts=None):
    """Integration in the (W, Z) chart at infinity."""
    opts = opts or IntegratorOptions()
    return _run(params, 1, start, direction, events, opts)


def concat(trajs):
    """Join consecutive trajectory legs in the same chart."""
    trajs = [t for t in trajs if len(t.s) > 0]
    if not trajs:
        raise ValueError("nothing to concatenate")
    chart = trajs[0].chart
    d = trajs[0].direction
    ss = [trajs[0].s]
    ps = [trajs[0].points]
    offset = trajs[0].s[-1]
    for t in trajs[1:]:
        if t.chart != chart or t.direction != d:
            raise ValueError("cannot concatenate across charts/directions")
        ss.append(t.s[1:] + offset)
        ps.append(t.points[1:])
        offset += t.s[-1]
    return Trajectory(chart=chart, s=np.concatenate(ss),
                      points=np.vstack(ps), direction=d,
                      termination=trajs[-1].termination,
                      hit=trajs[-1].hit)


def approach_point(params, start, direction, center, radii, opts,
                   events=(), chart="VC"):
    """Integrate toward a point, recording crossings of shrinking balls.

    Returns (trajectory, crossings) where crossings is a list of
    (radius, point) pairs in the order encountered.  Stops early if a
    non-ball event fires first.
    """
    run = integrate_planar if chart == "VC" else integrate_wz
    segs = []
    crossings = []
    cur = tuple(start)
    for r in sorted(radii, reverse=True):
        t = run(params, cur, direction,
                list(events) + [("ball", "target", center, r)], opts)
        segs.append(t)
        if t.termination != "hit_target" or t.hit != "target":
            break
        cur = t.end()
        crossings.append((r, cur))
    return concat(segs), crossings


def _log_x_integrand(params, traj):
    """d ln|x| / ds along the samples, valid in either chart.

    In the VC chart this is -lam*dir*D/|(G,F)|; in the WZ chart the same
    quantity expressed through the cleared field, -lam*dir*(Z w^2-1)/|f|.
    Finite through crossings of the G or F zero levels; degenerate only
    at critical points.
    """
    from .params import param_vector
    pv = param_vector(params)
    n, lam, Vstar, alpha, k1, k2, k3 = pv
    pts = traj.points
    chart_code = 0 if traj.chart == "VC" else 1
    a = pts[:, 0]
    b = pts[:, 1]
    if chart_code == 0:
        w = 1.0 + a
        Dlike = w * w - b * b
        G = n * b * b * (a - Vstar) - a * w * (lam + a)
        base = b * b - k1 * w * w + k2 * w - k3
        if alpha != 0.0:
            base = base + b * b * alpha / w
        F = b * base
        nrm = np.hypot(G, F)
    else:
        W = a
        Z = b
        V = Vstar + W
        w = 1.0 + V
        Dlike = Z * w * w - 1.0
        fW = n * W - Z * V * w * (lam + V)
        g = 1.0 + (alpha / w if alpha != 0.0 else 0.0)
        fZ = -2.0 * Z * (g - Z * (k1 * w * w - k2 * w + k3))
        nrm = np.hypot(fW, fZ)
    with np.errstate(divide="ignore", invalid="ignore"):
        integ = -lam * traj.direction * Dlike / nrm
    return integ


def x_parameterize(params, traj, anchor, singular_centers=()):
    """Attach x values by trapezoidal quadrature of d ln|x|.

    anchor = (index, x_anchor) pins x at one sample; the sign of
    x_anchor fixes the half-plane.  Returns a new Trajectory.

    Near a star-like critical point the integrand behaves like 1/rho
    and the plain trapezoid over adaptive steps is badly biased, so for
    segments close to any of the supplied singular_centers (chart
    coordinates) the quadrature switches to the log-radius variable, in
    which the integrand is smooth and the leading 1/rho part is exact.
    """
    idx, x_anchor = anchor
    if x_anchor == 0.0:
        raise ValueError("anchor x must be nonzero")
    integ = _log_x_integrand(params, traj)
    if not np.all(np.isfinite(integ)):
        raise ValueError("log-x integrand degenerate along the samples")
    ds = np.diff(traj.s)
    seg = 0.5 * (integ[:-1] + integ[1:]) * ds
    if singular_centers:
        pts = traj.points
        rho = np.full(len(pts), np.inf)
        for c in singular_centers:
            rho = np.minimum(rho, np.hypot(pts[:, 0] - c[0],
                                           pts[:, 1] - c[1]))
        r0, r1 = rho[:-1], rho[1:]
        drho = r1 - r0
        near = (np.maximum(r0, r1) < 0.3) & (np.abs(drho) > 0.5 * ds)
        with np.errstate(divide="ignore", invalid="ignore"):
            slant = np.where(near, ds / np.abs(drho), 1.0)
            j0 = integ[:-1] * r0
            j1 = integ[1:] * r1
            log_seg = (0.5 * (j0 + j1) * (np.log(r1) - np.log(r0))
                       * np.sign(drho) * slant)
        seg = np.where(near, log_seg, seg)
    lnx = np.concatenate(([0.0], np.cumsum(seg)))
    lnx = lnx - lnx[idx] + math.log(abs(x_anchor))
    x = math.copysign(1.0, x_anchor) * np.exp(lnx)
    return Trajectory(chart=traj.chart, s=traj.s, points=traj.points,
                      direction=traj.direction,
                      termination=traj.termination, hit=traj.hit, x=x)


__all__ = [
    "IntegratorOptions", "Trajectory", "rhs_x", "integrate_planar",
    "integrate_wz", "approach_point", "concat", "x_parameterize",
]
