"""Low-level integration kernels.

The phase-plane vector fields and the adaptive Runge-Kutta stepper live
here and are compiled with numba when it is importable.  Setting the
environment variable SSFLOW_NO_NUMBA=1 forces the pure-Python fallback;
the same source functions run uncompiled, so both paths share one
implementation.

Charts:
  chart 0: the (V, C) plane.  Raw field is (G, F).
  chart 1: the (W, Z) chart at infinity, W = V - V*, Z = C^-2, with the
           common positive factor cleared so the field is polynomial and
           well conditioned near the origin of the chart.

The stepper integrates the arclength-normalized field, so the step size
is geometric distance in the active chart and event localization is a
bisection in path length.
"""

import os

import numpy as np


def _numba_wanted():
    flag = os.environ.get("SSFLOW_NO_NUMBA", "0").strip().lower()
    return flag in ("", "0", "false", "no")


NUMBA_ENABLED = False
if _numba_wanted():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if NUMBA_ENABLED:
    def _jit(func):
        return _njit(cache=True)(func)
else:
    def _jit(func):
        return func


# Termination status codes returned by integrate_core.
STATUS_SMAX = 0
STATUS_BALL = 1
STATUS_SIGN = 2
STATUS_BOX = 3
STATUS_STEP_FLOOR = 4
STATUS_MAX_STEPS = 5

# Indices of the watched sign channels.
CHANNEL_D = 0
CHANNEL_G = 1
CHANNEL_F = 2


@_jit
def field_raw(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a, b):
    """Raw (un-normalized) field value at (a, b) in the given chart.

    d = +1 or -1 selects the traversal direction.
    """
    if chart == 0:
        V = a
        C = b
        w = 1.0 + V
        G = n * C * C * (V - Vstar) - V * w * (lam + V)
        base = C * C - k1 * w * w + k2 * w - k3
        if alpha != 0.0:
            base += C * C * alpha / w
        F = C * base
        return d * G, d * F
    else:
        W = a
        Z = b
        V = Vstar + W
        w = 1.0 + V
        fW = n * W - Z * V * w * (lam + V)
        g = 1.0
        if alpha != 0.0:
            g += alpha / w
        fZ = -2.0 * Z * (g - Z * (k1 * w * w - k2 * w + k3))
        return d * fW, d * fZ


@_jit
def _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a, b):
    f0, f1 = field_raw(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a, b)
    nrm = np.sqrt(f0 * f0 + f1 * f1)
    if nrm == 0.0:
        return 0.0, 0.0
    return f0 / nrm, f1 / nrm


@_jit
def event_channels(chart, n, lam, Vstar, alpha, k1, k2, k3, a, b):
    """Sign-channel values (D-like, G-like, F-like) at a chart point.

    In the VC chart these are D, G and the C-cleared bracket of F (so the
    channel does not vanish identically on the V-axis).  In the WZ chart
    the same loci are expressed through Z-scaled equivalents that share
    the signs of the VC quantities for C > 0.
    """
    if chart == 0:
        V = a
        C = b
        w = 1.0 + V
        vD = w * w - C * C
        vG = n * C * C * (V - Vstar) - V * w * (lam + V)
        vF = C * C - k1 * w * w + k2 * w - k3
        if alpha != 0.0:
            vF += C * C * alpha / w
        return vD, vG, vF
    else:
        W = a
        Z = b
        V = Vstar + W
        w = 1.0 + V
        vD = Z * w * w - 1.0
        vG = n * W - Z * V * w * (lam + V)
        vF = 1.0 - Z * (k1 * w * w - k2 * w + k3)
        if alpha != 0.0:
            vF += alpha / w
        return vD, vG, vF


@_jit
def _dp_step(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a, b, h):
    """One Dormand-Prince 5(4) step of size h on the unit-speed field.

    Returns (a1, b1, err_a, err_b) where err is the embedded 4th/5th
    order difference.
    """
    k1a, k1b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a, b)
    ya = a + h * (0.2 * k1a)
    yb = b + h * (0.2 * k1b)
    k2a, k2b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, ya, yb)
    ya = a + h * (3.0 / 40.0 * k1a + 9.0 / 40.0 * k2a)
    yb = b + h * (3.0 / 40.0 * k1b + 9.0 / 40.0 * k2b)
    k3a, k3b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, ya, yb)
    ya = a + h * (44.0 / 45.0 * k1a - 56.0 / 15.0 * k2a + 32.0 / 9.0 * k3a)
    yb = b + h * (44.0 / 45.0 * k1b - 56.0 / 15.0 * k2b + 32.0 / 9.0 * k3b)
    k4a, k4b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, ya, yb)
    ya = a + h * (19372.0 / 6561.0 * k1a - 25360.0 / 2187.0 * k2a
                  + 64448.0 / 6561.0 * k3a - 212.0 / 729.0 * k4a)
    yb = b + h * (19372.0 / 6561.0 * k1b - 25360.0 / 2187.0 * k2b
                  + 64448.0 / 6561.0 * k3b - 212.0 / 729.0 * k4b)
    k5a, k5b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, ya, yb)
    ya = a + h * (9017.0 / 3168.0 * k1a - 355.0 / 33.0 * k2a
                  + 46732.0 / 5247.0 * k3a + 49.0 / 176.0 * k4a
                  - 5103.0 / 18656.0 * k5a)
    yb = b + h * (9017.0 / 3168.0 * k1b - 355.0 / 33.0 * k2b
                  + 46732.0 / 5247.0 * k3b + 49.0 / 176.0 * k4b
                  - 5103.0 / 18656.0 * k5b)
    k6a, k6b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, ya, yb)
    a1 = a + h * (35.0 / 384.0 * k1a + 500.0 / 1113.0 * k3a
                  + 125.0 / 192.0 * k4a - 2187.0 / 6784.0 * k5a
                  + 11.0 / 84.0 * k6a)
    b1 = b + h * (35.0 / 384.0 * k1b + 500.0 / 1113.0 * k3b
                  + 125.0 / 192.0 * k4b - 2187.0 / 6784.0 * k5b
                  + 11.0 / 84.0 * k6b)
    k7a, k7b = _fhat(chart, d, n, lam, Vstar, alpha, k1, k2, k3, a1, b1)
    ea = h * (71.0 / 57600.0 * k1a - 71.0 / 16695.0 * k3a
              + 71.0 / 1920.0 * k4a - 17253.0 / 339200.0 * k5a
              + 22.0 / 525.0 * k6a - 1.0 / 40.0 * k7a)
    eb = h * (71.0 / 57600.0 * k1b - 71.0 / 16695.0 * k3b
              + 71.0 / 1920.0 * k4b - 17253.0 / 339200.0 * k5b
              + 22.0 / 525.0 * k6b - 1.0 / 40.0 * k7b)
    return a1, b1, ea, eb


@_jit
def _inside_box(a, b, box):
    return box[0] <= a <= box[1] and box[2] <= b <= box[3]


@_jit
def integrate_core(chart, d,
                   n, lam, Vstar, alpha, k1, k2, k3,
                   a0, b0,
                   smax, max_step, rtol, atol, event_tol, hmin,
                   stops, box, watch, max_steps):
    """Event-driven adaptive integration of the normalized field.

    stops: (K, 3) array of (a, b, radius) terminal balls.
    box:   (4,) array (amin, amax, bmin, bmax); leaving it terminates.
    watch: (3,) int array; nonzero entries request termination on a sign
           change of the corresponding event channel (D, G, F order).

    Returns (samples, svals, nsamp, status, hit) where hit is the ball
    index for STATUS_BALL and the channel index for STATUS_SIGN.
    """
    out = np.empty((max_steps + 1, 2))
    svals = np.empty(max_steps + 1)
    out[0, 0] = a0
    out[0, 1] = b0
    svals[0] = 0.0
    nsamp = 1

    nstop = stops.shape[0]
    ball_armed = np.zeros(nstop, dtype=np.int64)
    for i in range(nstop):
        da = a0 - stops[i, 0]
        db = b0 - stops[i, 1]
        if np.sqrt(da * da + db * db) > stops[i, 2]:
            ball_armed[i] = 1

    sign_armed = np.zeros(3, dtype=np.int64)
    sign_prev = np.zeros(3)
    vD, vG, vF = event_channels(chart, n, lam, Vstar, alpha, k1, k2, k3,
                                a0, b0)
    chans = np.empty(3)
    chans[0] = vD
    chans[1] = vG
    chans[2] = vF
    for j in range(3):
        if watch[j] != 0 and np.abs(chans[j]) > 1e-13:
            sign_armed[j] = 1
            sign_prev[j] = chans[j]

    a = a0
    b = b0
    s = 0.0
    h = max_step * 0.01
    if h > smax:
        h = smax

    status = STATUS_MAX_STEPS
    hit = -1

    while nsamp <= max_steps:
        if s >= smax:
            status = STATUS_SMAX
            hit = -1
            break
        if h > smax - s:
            h = smax - s
        if h < hmin:
            status = STATUS_STEP_FLOOR
            hit = -1
            break

        a1, b1, ea, eb = _dp_step(chart, d, n, lam, Vstar, alpha,
                                  k1, k2, k3, a, b, h)
        sca = atol + rtol * max(np.abs(a), np.abs(a1))
        scb = atol + rtol * max(np.abs(b), np.abs(b1))
        err = np.sqrt(0.5 * ((ea / sca) ** 2 + (eb / scb) ** 2))
        if err > 1.0:
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            h = h * fac
            continue

        # Accepted step; look for the earliest triggered event in (a,b)
        # -> (a1,b1).  theta is the fraction of h at which it fires.
        theta_best = 2.0
        ev_status = -1
        ev_hit = -1

        for i in range(nstop):
            da = a1 - stops[i, 0]
            db = b1 - stops[i, 1]
            dist1 = np.sqrt(da * da + db * db)
            if ball_armed[i] == 0:
                if dist1 > stops[i, 2]:
                    ball_armed[i] = 1
                continue
            if dist1 < stops[i, 2]:
                lo = 0.0
                hi = 1.0
                while (hi - lo) * h > event_tol:
                    mid = 0.5 * (lo + hi)
                    ta, tb, ea2, eb2 = _dp_step(chart, d, n, lam, Vstar,
                                                alpha, k1, k2, k3, a, b,
                                                mid * h)
                    da = ta - stops[i, 0]
                    db = tb - stops[i, 1]
                    if np.sqrt(da * da + db * db) < stops[i, 2]:
                        hi = mid
                    else:
                        lo = mid
                if hi < theta_best:
                    theta_best = hi
                    ev_status = STATUS_BALL
                    ev_hit = i

        vD, vG, vF = event_channels(chart, n, lam, Vstar, alpha,
                                    k1, k2, k3, a1, b1)
        chans[0] = vD
        chans[1] = vG
        chans[2] = vF
        for j in range(3):
            if watch[j] == 0:
                continue
            if sign_armed[j] == 0:
                if np.abs(chans[j]) > 1e-13:
                    sign_armed[j] = 1
                    sign_prev[j] = chans[j]
                continue
            if chans[j] == 0.0 or (chans[j] > 0.0) != (sign_prev[j] > 0.0):
                lo = 0.0
                hi = 1.0
                while (hi - lo) * h > event_tol:
                    mid = 0.5 * (lo + hi)
                    ta, tb, ea2, eb2 = _dp_step(chart, d, n, lam, Vstar,
                                                alpha, k1, k2, k3, a, b,
                                                mid * h)
                    wD, wG, wF = event_channels(chart, n, lam, Vstar,
                                                alpha, k1, k2, k3, ta, tb)
                    if j == 0:
                        val = wD
                    elif j == 1:
                        val = wG
                    else:
                        val = wF
                    if val == 0.0 or (val > 0.0) != (sign_prev[j] > 0.0):
                        hi = mid
                    else:
                        lo = mid
                if hi < theta_best:
                    theta_best = hi
                    ev_status = STATUS_SIGN
                    ev_hit = j
            else:
                sign_prev[j] = chans[j]

        if not _inside_box(a1, b1, box):
            lo = 0.0
            hi = 1.0
            while (hi - lo) * h > event_tol:
                mid = 0.5 * (lo + hi)
                ta, tb, ea2, eb2 = _dp_step(chart, d, n, lam, Vstar,
                                            alpha, k1, k2, k3, a, b,
                                            mid * h)
                if _inside_box(ta, tb, box):
                    lo = mid
                else:
                    hi = mid
            if hi < theta_best:
                theta_best = hi
                ev_status = STATUS_BOX
                ev_hit = -1

        if ev_status >= 0:
            ta, tb, ea2, eb2 = _dp_step(chart, d, n, lam, Vstar, alpha,
                                        k1, k2, k3, a, b, theta_best * h)
            out[nsamp, 0] = ta
            out[nsamp, 1] = tb
            svals[nsamp] = s + theta_best * h
            nsamp += 1
            status = ev_status
            hit = ev_hit
            break

        a = a1
        b = b1
        s = s + h
        out[nsamp, 0] = a
        out[nsamp, 1] = b
        svals[nsamp] = s
        nsamp += 1

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h = h * fac
        if h > max_step:
            h = max_step

    return out, svals, nsamp, status, hit
