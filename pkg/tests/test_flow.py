import math

import numpy as np
import pytest

from ssflow.builder import (assemble, build_gamma1, build_gamma2,
                            build_separatrices)
from ssflow.flow import (attach_density, collapse_regularity,
                         entropy_residual, gradient_diagnostics,
                         sample_flow)
from ssflow.params import SimilarityParams, derive_constants

FLAGSHIP = SimilarityParams.isentropic(3, 12.0, 0.02)


def _build(params, wz_offset=1e-6):
    g1 = build_gamma1(params, wz_offset=wz_offset)
    sep = build_separatrices(params)
    g2 = build_gamma2(params, s_target=math.inf, sep=sep)
    return assemble(params, g1, g2)


@pytest.fixture(scope="module")
def solution():
    return _build(FLAGSHIP)


@pytest.fixture(scope="module")
def field(solution):
    return attach_density(FLAGSHIP, solution)


@pytest.fixture(scope="module")
def deep_field():
    # the tiny eigen-line offset pushes coverage to very deep |x|,
    # needed for the r -> 0 gradient limits
    return attach_density(FLAGSHIP, _build(FLAGSHIP, wz_offset=1e-13))


def test_requires_isentropic(solution):
    p = SimilarityParams(n=3, gamma=12.0, lam=0.02, kappa=0.3)
    with pytest.raises(ValueError):
        attach_density(p, solution)
    with pytest.raises(ValueError):
        collapse_regularity(p)


def test_entropy_residual_small(field):
    assert entropy_residual(field) < 1e-8


def test_pressure_relation(field):
    out = sample_flow(field, -1.0, np.geomspace(0.3, 30.0, 40))
    gamma = FLAGSHIP.gamma
    assert np.allclose(out["p"], out["rho"] * out["c"] ** 2 / gamma,
                       rtol=1e-14)
    assert np.all(out["rho"][out["ok"]] > 0.0)
    assert np.all(out["c"][out["ok"]] > 0.0)


def test_rho_ref_scaling(solution):
    f1 = attach_density(FLAGSHIP, solution, rho_ref=1.0)
    f2 = attach_density(FLAGSHIP, solution, rho_ref=7.0)
    a = sample_flow(f1, -1.0, np.array([0.5, 2.0]))
    b = sample_flow(f2, -1.0, np.array([0.5, 2.0]))
    assert np.allclose(b["rho"], 7.0 * a["rho"], rtol=1e-12)
    assert np.allclose(b["u"], a["u"], rtol=1e-12)
    assert np.allclose(b["c"], a["c"], rtol=1e-12)


def test_collapse_time_exponents(field):
    # at t = 0 the profiles are pure power laws: u, c ~ r^(1-lam),
    # rho ~ r^kappa_hat
    dc = derive_constants(FLAGSHIP)
    r = np.geomspace(1e-3, 1e-1, 5)
    out = sample_flow(field, 0.0, r)
    lr = np.log(r)
    for key, expect in (("u", 1.0 - FLAGSHIP.lam),
                        ("c", 1.0 - FLAGSHIP.lam),
                        ("rho", dc.kappa_hat)):
        slope = np.polyfit(lr, np.log(np.abs(out[key])), 1)[0]
        assert slope == pytest.approx(expect, rel=1e-2), key


def test_gradient_limits(deep_field):
    diag = gradient_diagnostics(deep_field, t_bar=-1.0)
    assert diag["u_r_limit"] == pytest.approx(diag["u_r_expected"],
                                              rel=1e-3)
    assert abs(diag["c_r_limit"]) < 1e-4


def test_gradient_requires_coverage(field):
    # the default build does not reach deep enough x for tiny radii
    with pytest.raises(ValueError, match="eigen-line offset"):
        gradient_diagnostics(field, t_bar=-1.0, levels=40)


def test_collapse_regularity_table():
    flags = collapse_regularity(FLAGSHIP)
    assert flags["uc_blowup"] is True
    assert flags["rho_blowup"] is True
    assert flags["p_blowup"] is False
    fast = SimilarityParams.isentropic(3, 1.4, 0.9)
    assert collapse_regularity(fast)["p_blowup"] is True


def test_origin_row_filled(field):
    i0 = field.solution.origin_index
    assert math.isfinite(field.VoX[i0])
    assert field.CoX[i0] == field.solution.omega
    assert field.R[i0] > 0.0
