import math

import numpy as np
import pytest

from ssflow.builder import (assemble, build_gamma1, build_gamma2,
                            build_separatrices, depart_P8)
from ssflow.errors import ConstructionError
from ssflow.local_analysis import node_data_P8
from ssflow.ode_engine import IntegratorOptions
from ssflow.params import SimilarityParams

FLAGSHIP = SimilarityParams.isentropic(3, 12.0, 0.02)


@pytest.fixture(scope="module")
def nd():
    return node_data_P8(FLAGSHIP)


@pytest.fixture(scope="module")
def g1():
    return build_gamma1(FLAGSHIP)


@pytest.fixture(scope="module")
def sep():
    return build_separatrices(FLAGSHIP)


@pytest.fixture(scope="module")
def solution(g1, nd, sep):
    g2 = build_gamma2(FLAGSHIP, s_target=math.inf, nd=nd, sep=sep)
    return assemble(FLAGSHIP, g1, g2)


def test_gamma1_reaches_node(g1, nd):
    assert g1["reached_P8"]
    assert g1["failure"] is None
    # the inflow curve lands along the primary eigen-direction
    assert g1["arrival_slope"] == pytest.approx(nd.L1, rel=1e-3)


def test_gamma1_requires_node():
    p = SimilarityParams.isentropic(3, 5.0, 0.02)
    with pytest.raises(ConstructionError):
        build_gamma1(p)


def test_separatrix_slopes(sep):
    assert sep.zeta == pytest.approx(9.568205819432455, rel=1e-5)
    assert sep.eps_nonnegative
    assert abs(sep.eps) < 1e-6
    assert sep.delta == max(sep.zeta, sep.eps)


def test_mirror_branch_is_reflection(sep):
    assert np.allclose(sep.psi.points[:, 0], sep.phi.points[:, 0])
    assert np.allclose(sep.psi.points[:, 1], -sep.phi.points[:, 1])


def test_fan_spans_slopes(nd, sep):
    # the secondary-direction end of the fan arrives with slope ~ eps
    r = depart_P8(FLAGSHIP, 1.0, nd=nd, sep=sep)
    assert r["phi_angle"] is not None
    assert abs(r["s"] - sep.eps) < 1e-4
    with pytest.raises(ValueError):
        depart_P8(FLAGSHIP, 1.5, nd=nd, sep=sep)


def test_gamma2_rejects_bounded_slopes(nd, sep):
    with pytest.raises(ConstructionError):
        build_gamma2(FLAGSHIP, s_target=0.5 * sep.delta, nd=nd, sep=sep)
    with pytest.raises(ConstructionError):
        build_gamma2(FLAGSHIP, s_target=-sep.delta, nd=nd, sep=sep)


def test_finite_slope_target(nd, sep):
    s_req = 4.0 * sep.delta
    g2 = build_gamma2(FLAGSHIP, s_target=s_req, nd=nd, sep=sep)
    assert g2["s_upper"] == pytest.approx(s_req, rel=1e-4)
    assert g2["s_lower_src"] == pytest.approx(-s_req, rel=1e-4)


def test_assembled_invariants(solution):
    sol = solution
    assert sol.x8 == -1.0
    assert sol.x9 > 0.0
    assert sol.omega < 0.0
    assert np.all(np.diff(sol.xs) > 0.0)
    assert sol.xs[sol.origin_index] == 0.0
    off = sol.xs != 0.0
    assert np.all(np.sign(sol.xs[off]) * np.sign(sol.Cs[off]) == -1.0)
    # vertical arrival: the measured slope magnitude is huge
    assert abs(sol.s_origin) > 1e4
    # the lower-branch V/x limit agrees with the upper one after the
    # x-scale is tied through the sound-speed slope
    assert sol.info["nu_lower"] == pytest.approx(sol.nu, abs=1e-6)


def test_assembled_endpoint_values(solution, nd):
    sol = solution
    i8 = int(np.argmin(np.abs(sol.xs - sol.x8)))
    assert sol.Vs[i8] == pytest.approx(nd.V8, abs=1e-5)
    assert sol.Cs[i8] == pytest.approx(nd.C8, abs=1e-5)
    i9 = int(np.argmin(np.abs(sol.xs - sol.x9)))
    assert sol.Vs[i9] == pytest.approx(nd.V8, abs=1e-5)
    assert sol.Cs[i9] == pytest.approx(-nd.C8, abs=1e-5)


def test_halved_tolerances_stable_terminals(g1, nd, sep):
    base = IntegratorOptions()
    tight = IntegratorOptions(rel_tol=base.rel_tol / 2.0,
                              abs_tol=base.abs_tol / 2.0,
                              event_tol=base.event_tol / 2.0)
    sols = []
    for opts in (base, tight):
        g1o = build_gamma1(FLAGSHIP, opts=opts)
        sepo = build_separatrices(FLAGSHIP, opts=opts)
        g2o = build_gamma2(FLAGSHIP, s_target=math.inf, opts=opts,
                           sep=sepo)
        sols.append(assemble(FLAGSHIP, g1o, g2o))
    a, b = sols
    for sol in sols:
        i8 = int(np.argmin(np.abs(sol.xs - sol.x8)))
        assert math.hypot(sol.Vs[i8] - nd.V8, sol.Cs[i8] - nd.C8) < 1e-6
    assert abs(a.x9 - b.x9) < 1e-6
    # vertical default: compare reciprocal slopes
    assert abs(1.0 / a.s_origin - 1.0 / b.s_origin) < 1e-6
    assert abs(a.nu - b.nu) < 1e-6
