"""Static SVG phase portraits of the (V, C) plane.

Fixed 800x800 viewport.  Curves are polylines; the critical lines are
dashed, the V = V_star line and the zero levels of the numerator fields
dotted, critical points filled circles.  No external plotting library:
the output format is small enough to emit directly.
"""

import numpy as np

from .fields import f_zero_level, g_zero_level
from .params import derive_constants

SIZE = 800
MARGIN = 60

_STYLES = {
    "solid": "",
    "dashed": 'stroke-dasharray="9,6" ',
    "dotted": 'stroke-dasharray="2,5" ',
}


class Portrait:
    """Accumulates drawing elements in data coordinates, then renders."""

    def __init__(self, v_range=(-1.6, 0.6), c_range=(-1.6, 1.6)):
        self.v_range = v_range
        self.c_range = c_range
        self._elems = []

    def _map(self, V, C):
        v0, v1 = self.v_range
        c0, c1 = self.c_range
        span = SIZE - 2 * MARGIN
        x = MARGIN + (np.asarray(V, dtype=float) - v0) / (v1 - v0) * span
        y = SIZE - MARGIN - (np.asarray(C, dtype=float) - c0) \
            / (c1 - c0) * span
        return x, y

    def polyline(self, V, C, color="black", width=1.5, style="solid",
                 max_pts=4000):
        V = np.asarray(V, dtype=float)
        C = np.asarray(C, dtype=float)
        ok = np.isfinite(V) & np.isfinite(C)
        # split at gaps so masked stretches do not get bridged
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return
        breaks = np.flatnonzero(np.diff(idx) > 1)
        for seg in np.split(idx, breaks + 1):
            if seg.size < 2:
                continue
            Vs, Cs = V[seg], C[seg]
            if len(Vs) > max_pts:
                step = int(np.ceil(len(Vs) / max_pts))
                keep = np.r_[np.arange(0, len(Vs) - 1, step),
                             len(Vs) - 1]
                Vs, Cs = Vs[keep], Cs[keep]
            x, y = self._map(Vs, Cs)
            pts = " ".join(f"{xi:.2f},{yi:.2f}" for xi, yi in zip(x, y))
            self._elems.append(
                f'<polyline points="{pts}" fill="none" '
                f'stroke="{color}" stroke-width="{width}" '
                f'{_STYLES[style]}/>')

    def point(self, V, C, label=None, color="black", r=4):
        x, y = self._map(V, C)
        self._elems.append(
            f'<circle cx="{float(x):.2f}" cy="{float(y):.2f}" r="{r}" '
            f'fill="{color}"/>')
        if label:
            self._elems.append(
                f'<text x="{float(x) + 7:.2f}" y="{float(y) - 7:.2f}" '
                f'font-size="15" font-family="sans-serif">{label}</text>')

    def render(self):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">\n'
                f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>\n')
        return head + "\n".join(self._elems) + "\n</svg>\n"

    def save(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write(self.render())


def draw_background(portrait, params, n_grid=600):
    """Axes, critical lines, V = V_star, and the F/G zero levels."""
    v0, v1 = portrait.v_range
    c0, c1 = portrait.c_range
    dc = derive_constants(params)
    Vg = np.linspace(v0, v1, n_grid)

    portrait.polyline([v0, v1], [0.0, 0.0], color="#999", width=1.0)
    portrait.polyline([0.0, 0.0], [c0, c1], color="#999", width=1.0)
    portrait.polyline(Vg, 1.0 + Vg, color="#444", style="dashed",
                      width=1.0)
    portrait.polyline(Vg, -(1.0 + Vg), color="#444", style="dashed",
                      width=1.0)
    portrait.polyline([dc.V_star, dc.V_star], [c0, c1], color="#444",
                      style="dotted", width=1.0)

    with np.errstate(invalid="ignore"):
        gC = np.sqrt(g_zero_level(params, Vg))
        fC = np.sqrt(f_zero_level(params, Vg))
    for lev, color in ((gC, "#1f77b4"), (fC, "#d62728")):
        portrait.polyline(Vg, lev, color=color, style="dotted",
                          width=1.2)
        portrait.polyline(Vg, -lev, color=color, style="dotted",
                          width=1.2)


def draw_critical_points(portrait, points):
    v0, v1 = portrait.v_range
    c0, c1 = portrait.c_range
    for cp in points:
        if not (np.isfinite(cp.V) and np.isfinite(cp.C)):
            continue
        if v0 <= cp.V <= v1 and c0 <= cp.C <= c1:
            portrait.point(cp.V, cp.C, label=cp.id)


def portrait_svg(params, solution=None, critical=None, hugoniot=None,
                 v_range=None, c_range=None):
    """Full portrait: background, critical points, solution, H locus."""
    if v_range is None or c_range is None:
        vr = (-1.6, 0.6)
        cr = (-1.6, 1.6)
        if solution is not None:
            V = solution.Vs
            C = solution.Cs
            pad = 0.15
            vr = (min(V.min() - pad, -1.1), max(V.max() + pad, 0.2))
            cr = (min(C.min() - pad, -1.1), max(C.max() + pad, 1.1))
        v_range = v_range or vr
        c_range = c_range or cr
    p = Portrait(v_range=v_range, c_range=c_range)
    draw_background(p, params)
    if critical is not None:
        draw_critical_points(p, critical)
    if solution is not None:
        p.polyline(solution.Vs, solution.Cs, color="black", width=2.0)
    if hugoniot is not None:
        H = np.asarray(hugoniot)
        p.polyline(H[:, 0], H[:, 1], color="#2ca02c", width=1.5,
                   style="dashed")
    return p


__all__ = ["Portrait", "draw_background", "draw_critical_points",
           "portrait_svg", "SIZE"]
