"""Location, presence analysis and classification of the equilibria.

The finite equilibria are P1..P9; P6..P9 sit on the critical lines
C = +-(1+V) and exist only when a quadratic in V has real roots.  The
pair at infinity (V -> V_*, |C| -> inf) is analyzed in the (W, Z)
chart.
"""

import math
from dataclasses import dataclass

from .fields import g_zero_level
from .params import derive_constants

# Two reported points closer than this are flagged as coincident.
COINCIDENCE_TOL = 1e-8


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    V: float
    C: float
    kind: str       # star-node | saddle | node | unclassified
    on_line: str    # L+ | L- | V-axis | none


@dataclass(frozen=True)
class PresenceReport:
    case_id: str    # (i) | (ii) | (iii) | (iv) | (a) | (b)
    lambda_max: float | None
    lambda_min: float | None
    P68_present: bool


def locate_axis_points(params):
    """The three equilibria on the V-axis."""
    return [
        CriticalPoint("P1", 0.0, 0.0, "star-node", "V-axis"),
        CriticalPoint("P2", -1.0, 0.0, "unclassified", "V-axis"),
        CriticalPoint("P3", -params.lam, 0.0, "unclassified", "V-axis"),
    ]


def locate_P4(params):
    """The interior equilibrium below the upper critical line.

    V4 is independent of kappa; C4 comes from the G zero level at V4.
    """
    dc = derive_constants(params)
    V4 = -params.lam / (1.0 + (params.n / 2.0) * (params.gamma - 1.0))
    if abs(V4 - dc.V_star) < 1e-300:
        raise ValueError("V4 coincides with V_*; C4 undefined")
    c2 = g_zero_level(params, V4)
    if not (c2 == c2):  # nan: negative radicand
        raise ValueError("C4^2 negative: P4 is off the real phase plane")
    return CriticalPoint("P4", V4, math.sqrt(c2), _p4_kind(params, V4),
                         "none")


def _p4_kind(params, V4):
    roots = locate_P68(params)
    if roots is None:
        return "unclassified"
    V6, V8 = roots
    dc = derive_constants(params)
    c2 = g_zero_level(params, V4)
    W4 = 2.0 * dc.k * c2 * (V4 - V6) * (V4 - V8)
    return "saddle" if W4 < 0.0 else "unclassified"


def locate_P68(params, force_general=False):
    """Roots (V6, V8) of the critical-line quadratic, or None if absent.

    The isentropic fast path is used when kappa equals the isentropic
    value; both paths agree there.  Roots are extracted with the
    cancellation-safe combination of the stable root and the root
    product (V8 - V_* is tiny for lam << 1, where the naive difference
    of nearly equal terms loses digits).
    """
    n = params.n
    gamma = params.gamma
    kappa = params.kappa
    dc = derive_constants(params)
    m = dc.m
    mu = dc.mu

    if params.is_isentropic and not force_general:
        t = (gamma - 3.0) * mu / (m * (gamma - 1.0))
        a = t - 1.0
        Q = t * t - 2.0 * (gamma + 1.0) * mu / (m * (gamma - 1.0)) + 1.0
        if Q < 0.0:
            return None
        root = math.sqrt(Q)
        prod = 2.0 * mu / (m * (gamma - 1.0))
        if a < 0.0:
            V6 = 0.5 * (a - root)
            V8 = prod / V6 if V6 != 0.0 else 0.5 * (a + root)
        else:
            V8 = 0.5 * (a + root)
            V6 = prod / V8 if V8 != 0.0 else 0.5 * (a - root)
        return V6, V8

    b = (gamma - 2.0) * mu + kappa - m * gamma
    rad = ((gamma - 2.0) ** 2 * mu * mu
           - 2.0 * (gamma * m * (gamma + 2.0) - kappa * (gamma - 2.0)) * mu
           + (gamma * m + kappa) ** 2)
    if rad < 0.0:
        return None
    root = math.sqrt(rad)
    den = 2.0 * m * gamma
    prod = (2.0 * mu - kappa) / (m * gamma)
    if b < 0.0:
        V6 = (b - root) / den
        V8 = prod / V6 if V6 != 0.0 else (b + root) / den
    else:
        V8 = (b + root) / den
        V6 = prod / V8 if V8 != 0.0 else (b - root) / den
    return V6, V8


def presence_bounds(params):
    """Decision tree for the lambda-ranges on which V6, V8 are real."""
    gamma = params.gamma
    kappa = params.kappa
    lam = params.lam
    dc = derive_constants(params)
    m = dc.m

    if params.is_isentropic:
        if gamma == 3.0:
            lmax = 1.0 + m / 4.0
            return PresenceReport("(a)", lmax, None, lam <= lmax)
        root = math.sqrt(8.0 * (gamma - 1.0))
        lmax = 1.0 + m * (gamma - 1.0) / ((gamma + 1.0) + root)
        den = (gamma + 1.0) - root
        lmin = 1.0 + m * (gamma - 1.0) / den if den > 0.0 else None
        present = lam <= lmax or (lmin is not None and lam >= lmin)
        return PresenceReport("(b)", lmax, lmin, present)

    if gamma == 2.0:
        lmax = 1.0 + (2.0 * m + kappa) ** 2 / (16.0 * m)
        return PresenceReport("(i)", lmax, None, lam <= lmax)
    disc = 2.0 * gamma * m - kappa * (gamma - 2.0)
    if disc < 0.0:
        return PresenceReport("(ii)", None, None, True)
    if kappa == -gamma * m:
        lmin = 1.0 + 4.0 * m * gamma ** 2 / (gamma - 2.0) ** 2
        return PresenceReport("(iii)", 1.0, lmin,
                              lam <= 1.0 or lam >= lmin)
    root = math.sqrt(disc)
    gm = gamma * math.sqrt(m)
    lmax = 1.0 + (m * gamma + kappa) ** 2 / (gm + root) ** 2
    den = gm - root
    lmin = (1.0 + (m * gamma + kappa) ** 2 / den ** 2
            if den != 0.0 else None)
    present = lam <= lmax or (lmin is not None and lam >= lmin)
    return PresenceReport("(iv)", lmax, lmin, present)


def classify_infinity(params):
    """Linearization data of the saddle at infinity in the (W, Z) chart.

    dZ/dW = -A Z / (n W - B Z); the point is a saddle iff A > 0, and the
    unique non-axis linearized direction has slope (n + A)/B.
    """
    dc = derive_constants(params)
    Vs = dc.V_star
    A = 2.0 * (1.0 + (dc.alpha / (1.0 + Vs) if dc.alpha != 0.0 else 0.0))
    B = Vs * (1.0 + Vs) * (params.lam + Vs)
    degenerate = B == 0.0
    slope = (params.n + A) / B if not degenerate else math.inf
    return {"A": A, "B": B, "saddle": A > 0.0, "eigen_slope": slope,
            "degenerate": degenerate}


def verify_ordering(params):
    """Strict chain V6 < -1 < -lam < V4 < 0 < V_* < V8 (isentropic)."""
    dc = derive_constants(params)
    roots = locate_P68(params)
    if roots is None:
        return False
    V6, V8 = roots
    V4 = -params.lam / (1.0 + (params.n / 2.0) * (params.gamma - 1.0))
    chain = (V6, -1.0, -params.lam, V4, 0.0, dc.V_star, V8)
    return all(a < b for a, b in zip(chain, chain[1:]))


def critical_point_set(params):
    """All finite points plus the pair at infinity, with presence flags.

    Returns (points, presence, coincidences) where coincidences lists
    pairs of ids closer than COINCIDENCE_TOL.
    """
    from .local_analysis import node_data_P8  # deferred: module cycle

    points = list(locate_axis_points(params))
    try:
        p4 = locate_P4(params)
        points.append(p4)
        points.append(CriticalPoint("P5", p4.V, -p4.C, p4.kind, "none"))
    except ValueError:
        pass

    presence = presence_bounds(params)
    roots = locate_P68(params)
    if roots is not None:
        V6, V8 = roots
        kind8 = "unclassified"
        if params.is_isentropic:
            nd = node_data_P8(params)
            if nd.R2 > 0.0 and nd.W > 0.0:
                kind8 = "node"
        c6 = abs(1.0 + V6)
        c8 = abs(1.0 + V8)
        line6 = "L-" if 1.0 + V6 < 0.0 else "L+"
        line8 = "L+" if 1.0 + V8 > 0.0 else "L-"
        mirror = {"L+": "L-", "L-": "L+"}
        points.append(CriticalPoint("P6", V6, c6, "unclassified", line6))
        points.append(CriticalPoint("P7", V6, -c6, "unclassified",
                                    mirror[line6]))
        points.append(CriticalPoint("P8", V8, c8, kind8, line8))
        points.append(CriticalPoint("P9", V8, -c8, kind8, mirror[line8]))

    inf = classify_infinity(params)
    dc = derive_constants(params)
    kind_inf = "saddle" if inf["saddle"] else "unclassified"
    points.append(CriticalPoint("P+inf", dc.V_star, math.inf,
                                kind_inf, "none"))
    points.append(CriticalPoint("P-inf", dc.V_star, -math.inf,
                                kind_inf, "none"))

    finite = [p for p in points if math.isfinite(p.C)]
    coincidences = []
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            a, b = finite[i], finite[j]
            if math.hypot(a.V - b.V, a.C - b.C) < COINCIDENCE_TOL:
                coincidences.append((a.id, b.id))
    return points, presence, coincidences


__all__ = [
    "CriticalPoint", "PresenceReport", "locate_axis_points", "locate_P4",
    "locate_P68", "presence_bounds", "classify_infinity",
    "verify_ordering", "critical_point_set", "COINCIDENCE_TOL",
]
