import math

import numpy as np
import pytest

from ssflow.critical_points import (classify_infinity, critical_point_set,
                                    locate_P4, locate_P68,
                                    presence_bounds, verify_ordering)
from ssflow.params import SimilarityParams

REF = SimilarityParams(n=3, gamma=5.0 / 3.0, lam=2.0 / 3.0, kappa=1.0)


def test_P4_reference():
    p4 = locate_P4(REF)
    assert p4.V == pytest.approx(-1.0 / 3.0, rel=1e-13)
    assert p4.C == pytest.approx(1.0 / math.sqrt(27.0), rel=1e-13)
    assert p4.kind == "saddle"


def test_P68_reference():
    V6, V8 = locate_P68(REF)
    assert V6 == pytest.approx(-1.115069293303905, rel=1e-12)
    assert V8 == pytest.approx(0.44840262663723823, rel=1e-12)


def test_isentropic_and_general_roots_agree():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 4))
        gamma = float(rng.uniform(1.05, 40.0))
        lam = float(rng.uniform(0.02, 0.98))
        p = SimilarityParams.isentropic(n, gamma, lam)
        a = locate_P68(p)
        b = locate_P68(p, force_general=True)
        assert (a is None) == (b is None)
        if a is not None:
            assert a[0] == pytest.approx(b[0], rel=1e-10, abs=1e-12)
            assert a[1] == pytest.approx(b[1], rel=1e-10, abs=1e-12)


def test_presence_case_gamma2():
    p = SimilarityParams(n=3, gamma=2.0, lam=1.4, kappa=0.0)
    rep = presence_bounds(p)
    assert rep.case_id == "(i)"
    assert rep.lambda_max == pytest.approx(1.5, rel=1e-13)
    assert rep.P68_present


def test_presence_case_gamma3_isentropic():
    # cubic-gas isentropic threshold: lambda_max = 1 + m/4
    p = SimilarityParams.isentropic(3, 3.0, 0.5)
    rep = presence_bounds(p)
    assert rep.case_id == "(a)"
    assert rep.lambda_max == pytest.approx(1.5, rel=1e-12)
    assert rep.P68_present


def test_presence_always_when_condition_negative():
    # 2*gamma*m < kappa*(gamma-2) makes the radicand positive for all lam
    p = SimilarityParams(n=3, gamma=10.0, lam=1.7, kappa=6.0)
    rep = presence_bounds(p)
    assert rep.case_id == "(ii)"
    assert rep.P68_present


def test_ordering_random_isentropic():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 4))
        gamma = float(rng.uniform(1.05, 50.0))
        lam = float(rng.uniform(0.01, 0.99))
        p = SimilarityParams.isentropic(n, gamma, lam)
        assert verify_ordering(p), (n, gamma, lam)


def test_infinity_reference():
    inf = classify_infinity(REF)
    assert inf["A"] == pytest.approx(2.0, rel=1e-13)
    assert inf["B"] == pytest.approx(4.0 / 9.0, rel=1e-13)
    assert inf["saddle"]
    assert inf["eigen_slope"] == pytest.approx(11.25, rel=1e-12)


def test_point_set_full_roster():
    points, presence, coincidences = critical_point_set(REF)
    ids = {p.id for p in points}
    assert {"P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9",
            "P+inf", "P-inf"} <= ids
    assert not coincidences
    by_id = {p.id: p for p in points}
    assert by_id["P8"].on_line == "L+"
    assert by_id["P9"].on_line == "L-"
    assert by_id["P9"].C == -by_id["P8"].C
    assert by_id["P1"].kind == "star-node"
