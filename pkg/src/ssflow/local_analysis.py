"""Linearization data at the sonic node, regime boundary, and the
characteristic-focusing indicator A8.

Everything here is closed-form except the finite-difference route of
compute_A8, which exists to cross-validate the linearization route
against actual trajectory samples.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .critical_points import locate_P68
from .params import SimilarityParams, derive_constants


@dataclass(frozen=True)
class NodeData:
    V8: float
    C8: float
    V6: float
    V4: float
    F_C: float
    F_V: float
    G_C: float
    G_V: float
    W: float
    W_alt: float
    R2: float
    R: float | None
    L1: float | None
    L2: float | None
    E1: float | None
    E2: float | None
    node: bool


def _require_isentropic(params):
    if not params.is_isentropic:
        raise ValueError("requires the isentropic density exponent")


def node_data_P8(params):
    """Closed-form partials, Wronskian, discriminant and slopes at P8.

    L1 is the primary slope (all but one arriving curve is tangent to
    it), L2 the secondary; E1, E2 the corresponding exponents with
    |E1| < |E2|.
    """
    _require_isentropic(params)
    roots = locate_P68(params)
    if roots is None:
        raise ValueError("P8 absent for these parameters")
    V6, V8 = roots
    n = params.n
    lam = params.lam
    dc = derive_constants(params)
    C8 = 1.0 + V8
    V4 = -lam / (1.0 + (n / 2.0) * (params.gamma - 1.0))

    F_C = 2.0 * C8 * C8
    F_V = C8 * (dc.k2 - 2.0 * dc.k1 * C8)
    G_C = 2.0 * V8 * (lam + V8)
    G_V = C8 * (n - lam + n * dc.V_star - 2.0 * V8)

    W = F_C * G_V - F_V * G_C
    W_alt = 2.0 * dc.k * C8 * C8 * (V8 - V4) * (V8 - V6)
    R2 = (F_C + G_V) ** 2 - 4.0 * W

    if R2 > 0.0:
        R = math.sqrt(R2)
        L1 = (F_C - G_V - R) / (2.0 * G_C)
        L2 = (F_C - G_V + R) / (2.0 * G_C)
        E1 = (F_C + G_V - R) / (2.0 * G_C)
        E2 = (F_C + G_V + R) / (2.0 * G_C)
        node = W > 0.0
    else:
        R = L1 = L2 = E1 = E2 = None
        node = False
    return NodeData(V8=V8, C8=C8, V6=V6, V4=V4, F_C=F_C, F_V=F_V,
                    G_C=G_C, G_V=G_V, W=W, W_alt=W_alt, R2=R2, R=R,
                    L1=L1, L2=L2, E1=E1, E2=E2, node=node)


def wronskian_P4(params):
    """Wronskian at P4; negative means P4 (and P5) are saddles."""
    _require_isentropic(params)
    roots = locate_P68(params)
    if roots is None:
        raise ValueError("P6/P8 absent; W4 formula needs them")
    V6, V8 = roots
    dc = derive_constants(params)
    V4 = -params.lam / (1.0 + (params.n / 2.0) * (params.gamma - 1.0))
    from .fields import g_zero_level
    C4sq = g_zero_level(params, V4)
    return 2.0 * dc.k * C4sq * (V4 - V6) * (V4 - V8)


def discriminant(lam, gamma, n):
    """R2 as a function of (lam, gamma) at the isentropic exponent."""
    p = SimilarityParams.isentropic(n, gamma, lam)
    roots = locate_P68(p)
    if roots is None:
        return None
    V6, V8 = roots
    dc = derive_constants(p)
    C8 = 1.0 + V8
    V4 = -lam / (1.0 + (n / 2.0) * (gamma - 1.0))
    lhs = C8 * (n + 1.0 - (gamma + 1.0) / (gamma - 1.0) * dc.mu)
    return lhs * lhs - 8.0 * dc.k * C8 * C8 * (V8 - V4) * (V8 - V6)


def gamma3(lam, n=3, xtol=1e-8, gamma_cap=1e9):
    """Regime boundary in gamma at fixed lam, or None when absent.

    For n=3 the admissible band is lam in (0, 1/9) and the boundary is
    the root of the discriminant, increasing in lam with a vertical
    asymptote at 1/9.  For n=2 the band is (8/9, 1).  The root is
    bracketed on an expanding geometric grid and polished by Brent's
    method.
    """
    if n == 3:
        if not (0.0 < lam < 1.0 / 9.0):
            return None
        lo = 8.0
    else:
        if not (8.0 / 9.0 < lam < 1.0):
            return None
        lo = 1.0 + 1e-9

    def f(g):
        r2 = discriminant(lam, g, n)
        return r2 if r2 is not None else -1.0

    g = lo
    fg = f(g)
    while g < gamma_cap:
        g_next = g * 1.5
        fn = f(g_next)
        if (fg < 0.0) != (fn < 0.0):
            return brentq(f, g, g_next, xtol=xtol)
        g, fg = g_next, fn
    return None


def in_regime(params):
    """True iff the discriminant at P8 is positive."""
    _require_isentropic(params)
    r2 = discriminant(params.lam, params.gamma, params.n)
    return r2 is not None and r2 > 0.0


def aitken(seq):
    """One Aitken delta-squared pass over a sequence of estimates."""
    seq = list(seq)
    out = []
    for i in range(len(seq) - 2):
        a, b, c = seq[i], seq[i + 1], seq[i + 2]
        den = c - 2.0 * b + a
        if den == 0.0:
            out.append(c)
        else:
            out.append(c - (c - b) ** 2 / den)
    return out


def a8_linearized(params):
    """A8 from the linearization limit along the primary direction.

    A8 = lim lam*x*(V'(x) - C'(x)) + 1 as x -> x8 along a curve arriving
    tangent to L1; the limit of (F - G)/D under the linearization gives
    the closed form below.
    """
    nd = node_data_P8(params)
    if nd.L1 is None:
        raise ValueError("outside the node regime; A8 undefined")
    num = (nd.F_V - nd.G_V) + (nd.F_C - nd.G_C) * nd.L1
    return 1.0 + num / (2.0 * nd.C8 * (1.0 - nd.L1))


def richardson_known(vals, radii, beta, passes=2):
    """Richardson passes for errors c1 r^beta + c2 r^2beta + ...

    Returns the accelerated sequence after the requested passes (last
    entry is the best estimate).
    """
    vals = list(vals)
    radii = list(radii)
    for k in range(1, passes + 1):
        nxt = []
        rad = []
        for (a, ra), (b, rb) in zip(zip(vals, radii),
                                    zip(vals[1:], radii[1:])):
            w = (ra / rb) ** (k * beta)
            nxt.append((w * b - a) / (w - 1.0))
            rad.append(rb)
        vals, radii = nxt, rad
        if len(vals) < 2:
            break
    return vals


def approach_exponent(nd):
    """Decay exponent of the transverse component along an L1 arrival.

    A curve tangent to the primary direction closes onto it like
    distance^beta with beta = (E2 - E1)/E1.
    """
    if nd.E1 is None:
        raise ValueError("exponents absent outside the node regime")
    return (nd.E2 - nd.E1) / nd.E1


def a8_from_trajectory(params, traj, x8):
    """A8 by one-sided finite differences on the final samples.

    Secant estimates of V'(x), C'(x) are formed between samples nearest
    to decade-spaced distances from P8; they converge like a power of
    the distance with the known approach exponent, so two Richardson
    passes with that exponent extract the limit.
    """
    nd = node_data_P8(params)
    beta = approach_exponent(nd)
    pts = np.asarray(traj.points)
    x = np.asarray(traj.x)
    dist = np.hypot(pts[:, 0] - nd.V8, pts[:, 1] - nd.C8)
    radii = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9]
    idx = []
    for r in radii:
        i = int(np.argmin(np.abs(dist - r)))
        if not idx or i != idx[-1]:
            idx.append(i)
    ests = []
    rads = []
    for i, j in zip(idx, idx[1:]):
        dx = x[j] - x[i]
        if dx == 0.0:
            continue
        dV = (pts[j, 0] - pts[i, 0]) / dx
        dC = (pts[j, 1] - pts[i, 1]) / dx
        xm = 0.5 * (x[i] + x[j])
        ests.append(params.lam * xm * (dV - dC) + 1.0)
        rads.append(dist[j])
    if len(ests) < 3:
        raise ValueError("too few samples near P8 for the A8 secants")
    return richardson_known(ests, rads, beta, passes=2)[-1]


def compute_A8(params, gamma1):
    """Both A8 routes; returns the linearized value.

    The finite-difference route must agree to 1e-3 relative; on
    disagreement both values are still returned with flagged=True.
    """
    a8_b = a8_linearized(params)
    a8_a = a8_from_trajectory(params, gamma1, gamma1.x[-1])
    scale = max(abs(a8_b), 1e-30)
    flagged = abs(a8_a - a8_b) / scale > 1e-3
    return {"A8": a8_b, "A8_fd": a8_a, "flagged": flagged}


__all__ = [
    "NodeData", "node_data_P8", "wronskian_P4", "discriminant", "gamma3",
    "in_regime", "compute_A8", "a8_linearized", "a8_from_trajectory",
    "aitken", "richardson_known", "approach_exponent",
]
