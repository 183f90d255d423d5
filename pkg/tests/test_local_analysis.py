import math

import numpy as np
import pytest

from ssflow.critical_points import locate_P68
from ssflow.local_analysis import (a8_linearized, discriminant, gamma3,
                                   in_regime, node_data_P8,
                                   richardson_known, wronskian_P4)
from ssflow.params import SimilarityParams, derive_constants

FLAGSHIP = SimilarityParams.isentropic(3, 12.0, 0.02)


def sample_in_regime(rng, n=3, count=1):
    """Rejection-sample (lam, gamma) pairs inside the node regime."""
    out = []
    lo, hi = (0.002, 0.108) if n == 3 else (0.895, 0.995)
    while len(out) < count:
        lam = float(rng.uniform(lo, hi))
        gamma = float(rng.uniform(1.05, 2000.0))
        r2 = discriminant(lam, gamma, n)
        if r2 is not None and r2 > 0.0:
            out.append((lam, gamma))
    return out


def test_flagship_node_data():
    nd = node_data_P8(FLAGSHIP)
    assert nd.V8 == pytest.approx(0.06094382553060643, rel=1e-12)
    assert nd.V6 == pytest.approx(-1.4618529164396974, rel=1e-12)
    assert nd.F_C == pytest.approx(2.251203601863036, rel=1e-12)
    assert nd.F_V == pytest.approx(-20.022823412109737, rel=1e-12)
    assert nd.G_C == pytest.approx(0.009866052761834249, rel=1e-11)
    assert nd.G_V == pytest.approx(3.2213375491012015, rel=1e-12)
    assert nd.W == pytest.approx(7.4494329255780345, rel=1e-12)
    assert nd.R2 == pytest.approx(0.15097494668485112, rel=1e-11)
    assert nd.L1 == pytest.approx(-68.85676201209911, rel=1e-11)
    assert nd.L2 == pytest.approx(-29.47374266460634, rel=1e-11)
    assert nd.E1 == pytest.approx(257.65046705549673, rel=1e-11)
    assert nd.E2 == pytest.approx(297.0334864029895, rel=1e-11)
    assert nd.node


def test_wronskian_two_routes():
    rng = np.random.default_rng(3)
    for lam, gamma in sample_in_regime(rng, count=50):
        nd = node_data_P8(SimilarityParams.isentropic(3, gamma, lam))
        assert nd.W == pytest.approx(nd.W_alt, rel=1e-9)


def test_sum_identities():
    rng = np.random.default_rng(4)
    for lam, gamma in sample_in_regime(rng, count=50):
        p = SimilarityParams.isentropic(3, gamma, lam)
        nd = node_data_P8(p)
        dc = derive_constants(p)
        m = p.n - 1
        # the two V-numerator partials sum to m*C8*(V8 - V6)
        lhs = nd.G_V + nd.G_C
        assert lhs == pytest.approx(m * nd.C8 * (nd.V8 - nd.V6),
                                    rel=1e-9)
        assert lhs > 0.0
        # the C-numerator pair is the critical-line multiple of it
        assert nd.F_V + nd.F_C == pytest.approx(
            -0.5 * (p.gamma - 1.0) * lhs, rel=1e-9)
        # trace identity
        assert nd.F_C + nd.G_V == pytest.approx(
            nd.C8 * (p.n + 1.0 - (p.gamma + 1.0) / (p.gamma - 1.0)
                     * dc.mu), rel=1e-9)


def test_P4_saddle_wronskian_negative():
    rng = np.random.default_rng(5)
    for lam, gamma in sample_in_regime(rng, count=20):
        p = SimilarityParams.isentropic(3, gamma, lam)
        assert wronskian_P4(p) < 0.0


def test_slope_signs_by_dimension():
    rng = np.random.default_rng(6)
    for lam, gamma in sample_in_regime(rng, n=3, count=100):
        nd = node_data_P8(SimilarityParams.isentropic(3, gamma, lam))
        assert nd.L1 < nd.L2 < 0.0, (lam, gamma)
    for lam, gamma in sample_in_regime(rng, n=2, count=100):
        nd = node_data_P8(SimilarityParams.isentropic(2, gamma, lam))
        assert nd.L1 > 0.0, (lam, gamma)


def test_exponent_ordering():
    rng = np.random.default_rng(8)
    for lam, gamma in sample_in_regime(rng, count=50):
        nd = node_data_P8(SimilarityParams.isentropic(3, gamma, lam))
        assert abs(nd.E1) < abs(nd.E2)


def test_gamma3_limit_and_growth():
    assert gamma3(1e-9) == pytest.approx(8.725375886922263, rel=1e-6)
    assert gamma3(0.02) == pytest.approx(10.328662384058914, rel=1e-6)
    assert gamma3(0.11) > 100.0
    assert gamma3(0.2) is None


def test_in_regime_flagship():
    assert in_regime(FLAGSHIP)
    assert not in_regime(SimilarityParams.isentropic(3, 5.0, 0.02))


def test_a8_negative_in_regime():
    rng = np.random.default_rng(9)
    assert a8_linearized(FLAGSHIP) == pytest.approx(
        -0.19798666098530293, rel=1e-12)
    for lam, gamma in sample_in_regime(rng, count=20):
        p = SimilarityParams.isentropic(3, gamma, lam)
        assert a8_linearized(p) < 0.0, (lam, gamma)


def test_richardson_known_exact_power_law():
    beta = 0.3
    radii = [10.0 ** -k for k in range(2, 8)]
    vals = [5.0 + 2.0 * r ** beta - 3.0 * r ** (2 * beta)
            for r in radii]
    acc = richardson_known(vals, radii, beta, passes=2)
    assert acc[-1] == pytest.approx(5.0, rel=1e-10)
