import math
import types

import numpy as np
import pytest

from ssflow.builder import (assemble, build_gamma1, build_gamma2,
                            build_separatrices)
from ssflow.local_analysis import a8_linearized, gamma3
from ssflow.params import SimilarityParams
from ssflow.shock import (guderley_probe, hugoniot_locus, hugoniot_map,
                          lax_check, post_shock_state, shock_detect)

FLAGSHIP = SimilarityParams.isentropic(3, 12.0, 0.02)


def _build(params):
    g1 = build_gamma1(params)
    sep = build_separatrices(params)
    g2 = build_gamma2(params, s_target=math.inf, sep=sep)
    return assemble(params, g1, g2)


@pytest.fixture(scope="module")
def solution():
    return _build(FLAGSHIP)


def test_post_shock_closed_forms():
    # cubic gas: P+ = (-1/2, sqrt(3)/2)
    V, C = post_shock_state(3.0)
    assert V == pytest.approx(-0.5, rel=1e-15)
    assert C == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-15)
    for gamma in np.linspace(1.05, 40.0, 20):
        V, C = post_shock_state(gamma)
        assert V == pytest.approx(-2.0 / (gamma + 1.0), rel=1e-14)
        assert C * C == pytest.approx(
            2.0 * gamma * (gamma - 1.0) / (gamma + 1.0) ** 2, rel=1e-13)
        # P+ is the image of the quiescent origin state
        js = hugoniot_map(gamma, (0.0, 0.0), R_minus=1.0, sign=+1.0)
        assert js.plus[0] == pytest.approx(V, rel=1e-14)
        assert js.plus[1] == pytest.approx(C, rel=1e-14)
        # mass flux through the jump is conserved
        assert js.R_plus * (1.0 + js.plus[0]) == pytest.approx(
            1.0 * (1.0 + 0.0), rel=1e-14)


def test_zero_strength_on_sonic_line():
    rng = np.random.default_rng(12)
    for _ in range(50):
        gamma = float(rng.uniform(1.05, 30.0))
        V_m = float(rng.uniform(-0.9, 1.0))
        C_m = 1.0 + V_m
        js = hugoniot_map(gamma, (V_m, C_m))
        assert abs(js.plus[0] - V_m) < 1e-12
        assert abs(js.plus[1] - C_m) < 1e-12


def test_jump_conserves_rh_invariants():
    # reconstruct the frame quantities: w = 1+V, mass flux R*w,
    # momentum R*w^2 + R*C^2/gamma, Bernoulli w^2/2 + C^2/(gamma-1)
    rng = np.random.default_rng(13)
    for _ in range(50):
        gamma = float(rng.uniform(1.1, 20.0))
        V_m = float(rng.uniform(-0.5, 0.5))
        C_m = float(rng.uniform(0.0, 0.5)) * (1.0 + V_m)
        js = hugoniot_map(gamma, (V_m, C_m), R_minus=2.0, sign=+1.0)
        w_m, w_p = 1.0 + V_m, 1.0 + js.plus[0]
        R_m, R_p = js.R_minus, js.R_plus
        C_p = js.plus[1]
        mass_m, mass_p = R_m * w_m, R_p * w_p
        mom_m = R_m * w_m ** 2 + R_m * C_m ** 2 / gamma
        mom_p = R_p * w_p ** 2 + R_p * C_p ** 2 / gamma
        em = 0.5 * w_m ** 2 + C_m ** 2 / (gamma - 1.0)
        ep = 0.5 * w_p ** 2 + C_p ** 2 / (gamma - 1.0)
        assert mass_p == pytest.approx(mass_m, rel=1e-10)
        assert mom_p == pytest.approx(mom_m, rel=1e-10)
        assert ep == pytest.approx(em, rel=1e-10)


def test_lax_admissibility():
    gamma = 1.4
    js = hugoniot_map(gamma, (0.0, 0.0), sign=+1.0)
    assert lax_check(js.minus, js.plus)
    # a zero-strength jump is not admissible
    assert not lax_check((0.2, 1.2), (0.2, 1.2))
    # a supersonic pre-state is required
    assert not lax_check((0.0, 2.0), js.plus)


def test_probe_classic_converging_case():
    out = guderley_probe(3, 5.0 / 3.0, 0.5)
    assert not out["reached_P8"]
    assert out["termination"] == "crossed_Lplus"
    assert out["first_Lplus_crossing_V"] < out["V8"]


def test_probe_stiff_gas_start():
    gamma = 1e6
    V, C = post_shock_state(gamma)
    assert V == pytest.approx(0.0, abs=1e-5)
    assert C == pytest.approx(math.sqrt(2.0), rel=1e-5)
    out = guderley_probe(3, gamma, 0.5)
    assert not out["reached_P8"]


def test_probe_rejects_bad_lambda():
    with pytest.raises(ValueError):
        guderley_probe(3, 1.4, 1.2)


def test_locus_stays_below_lower_line(solution):
    H = hugoniot_locus(FLAGSHIP, solution.gamma2_lower)
    assert np.all(H[:, 1] <= 0.0)
    # images of subsonic pre-states are supersonic in the shock frame
    pre = solution.gamma2_lower.points
    sub = np.abs(pre[:, 1]) < (1.0 + pre[:, 0])
    assert np.all(-H[sub, 1] > 1.0 + H[sub, 0])


def test_no_shock_for_flagship(solution):
    H = hugoniot_locus(FLAGSHIP, solution.gamma2_lower)
    out = shock_detect(FLAGSHIP, H, solution.gamma3)
    assert out["intersection"] is None
    assert a8_linearized(FLAGSHIP) < 0.0


def test_synthetic_intersection_found(solution):
    # shift the locus sideways until it must cross Gamma3
    H = hugoniot_locus(FLAGSHIP, solution.gamma2_lower)
    g3 = solution.gamma3
    fake = types.SimpleNamespace(points=np.column_stack(
        [H[:, 0], H[:, 1] - 0.2]))
    out = shock_detect(FLAGSHIP, np.asarray(fake.points), g3)
    assert out["intersection"] is not None
    V, C = out["intersection"]
    assert C < -(1.0 + V)


def test_no_shock_random_in_regime():
    from test_local_analysis import sample_in_regime
    rng = np.random.default_rng(21)
    for lam, gamma in sample_in_regime(rng, count=5):
        p = SimilarityParams.isentropic(3, gamma, lam)
        sol = _build(p)
        H = hugoniot_locus(p, sol.gamma2_lower)
        out = shock_detect(p, H, sol.gamma3)
        assert out["intersection"] is None, (lam, gamma)
        assert a8_linearized(p) < 0.0
