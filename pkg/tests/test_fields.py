import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ssflow.fields import (chart_from_WZ, chart_to_WZ, eval_FGD,
                           f_zero_level, g_zero_level, slope_field)
from ssflow.params import SimilarityParams, derive_constants

PARAMS = SimilarityParams(n=3, gamma=5.0 / 3.0, lam=2.0 / 3.0, kappa=1.0)

point_draw = st.tuples(st.floats(-2.0, 1.0), st.floats(-3.0, 3.0))


@given(point_draw)
def test_reflection_symmetry(pt):
    # G is even in C, F is odd: mirrored trajectories solve the same system
    V, C = pt
    F1, G1, D1 = eval_FGD(PARAMS, V, C)
    F2, G2, D2 = eval_FGD(PARAMS, V, -C)
    scale = max(1.0, abs(F1), abs(G1))
    assert abs(G1 - G2) < 1e-12 * scale
    assert abs(F1 + F2) < 1e-12 * scale
    assert D1 == D2


@given(st.floats(-2.0, 1.0), st.sampled_from([1.0, -1.0]))
def test_critical_line_ratio(V, sgn):
    # on C = +-(1+V): F = -+ (gamma-1)/2 * G identically
    if abs(1.0 + V) < 1e-3:
        return
    C = sgn * (1.0 + V)
    F, G, D = eval_FGD(PARAMS, V, C)
    scale = max(1.0, abs(F), abs(G))
    assert abs(D) < 1e-12 * scale
    gm = PARAMS.gamma
    assert abs(F + sgn * 0.5 * (gm - 1.0) * G) < 1e-11 * scale


def test_slope_field_signs():
    dc = derive_constants(PARAMS)
    # vertical where the V-numerator vanishes off the C-numerator curve
    V = -0.2
    C = math.sqrt(g_zero_level(PARAMS, V))
    assert math.isinf(slope_field(PARAMS, V, C))
    # finite on the vertical asymptote line of the V-numerator level set
    s = slope_field(PARAMS, dc.V_star, 0.9)
    assert math.isfinite(s)


def test_wz_round_trip():
    V, C = -0.1, 2.5
    W, Z = chart_to_WZ(PARAMS, V, C)
    V2, C2 = chart_from_WZ(PARAMS, W, Z, 1.0)
    assert V2 == pytest.approx(V, rel=1e-14)
    assert C2 == pytest.approx(C, rel=1e-14)


def test_zero_levels_consistency():
    for V in (-0.5, -0.2, 0.1):
        c2 = g_zero_level(PARAMS, V)
        if np.isfinite(c2) and c2 > 0.0:
            F, G, D = eval_FGD(PARAMS, V, math.sqrt(c2))
            assert abs(G) < 1e-12
        c2 = f_zero_level(PARAMS, V)
        if np.isfinite(c2) and c2 > 0.0:
            F, G, D = eval_FGD(PARAMS, V, math.sqrt(c2))
            assert abs(F) < 1e-12


def test_vectorized_eval_matches_scalar():
    V = np.array([-0.5, -0.2, 0.1])
    C = np.array([0.3, 1.0, 0.7])
    F, G, D = eval_FGD(PARAMS, V, C)
    for i in range(3):
        f, g, d = eval_FGD(PARAMS, float(V[i]), float(C[i]))
        assert f == pytest.approx(F[i], rel=1e-15)
        assert g == pytest.approx(G[i], rel=1e-15)
        assert d == pytest.approx(D[i], rel=1e-15)
