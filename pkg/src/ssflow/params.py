"""Parameter record and derived constants of the similarity reduction.

The reduced autonomous system lives in the (V, C) plane and depends on
the quadruple (n, gamma, lambda, kappa) only through a handful of
derived constants; everything downstream reads those from
DerivedConstants.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimilarityParams:
    """The defining quadruple of a radial self-similar flow.

    n     : space dimension (2 or 3)
    gamma : adiabatic exponent, > 1
    lam   : similarity exponent (the regime of interest is 0 < lam < 1)
    kappa : density exponent
    """

    n: int
    gamma: float
    lam: float
    kappa: float

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ValueError("n must be 2 or 3")
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if self.kappa + self.n == 0.0:
            raise ValueError("kappa + n = 0 leaves q undefined")

    @classmethod
    def isentropic(cls, n, gamma, lam):
        """Parameters with kappa chosen so the flow is globally isentropic."""
        return cls(n=n, gamma=gamma, lam=lam,
                   kappa=isentropic_kappa(gamma, lam))

    @property
    def is_isentropic(self):
        khat = isentropic_kappa(self.gamma, self.lam)
        scale = max(abs(khat), 1.0)
        return abs(self.kappa - khat) <= 1e-14 * scale


def isentropic_kappa(gamma, lam):
    """The density exponent that annihilates alpha (and hence q)."""
    return 2.0 * (1.0 - lam) / (gamma - 1.0)


@dataclass(frozen=True)
class DerivedConstants:
    m: float
    mu: float
    V_star: float
    alpha: float
    k1: float
    k2: float
    k3: float
    k: float
    q: float
    kappa_hat: float
    lambda_bar: float


def derive_constants(params):
    """Evaluate all derived constants from the parameter quadruple."""
    n = params.n
    gamma = params.gamma
    lam = params.lam
    kappa = params.kappa
    m = n - 1.0
    mu = lam - 1.0
    V_star = (kappa - 2.0 * (lam - 1.0)) / (n * gamma)
    alpha = (kappa * (gamma - 1.0) + 2.0 * (lam - 1.0)) / (2.0 * gamma)
    k1 = 1.0 + m * (gamma - 1.0) / 2.0
    k2 = (m * (gamma - 1.0) + (gamma - 3.0) * mu) / 2.0
    k3 = (gamma - 1.0) * mu / 2.0
    k = (m / 2.0) * (n * (gamma - 1.0) + 2.0)
    q = 2.0 * gamma * alpha / (kappa + n)
    kappa_hat = isentropic_kappa(gamma, lam)
    lambda_bar = 1.0 + (n / 2.0) * (1.0 - 1.0 / gamma)
    return DerivedConstants(m=m, mu=mu, V_star=V_star, alpha=alpha,
                            k1=k1, k2=k2, k3=k3, k=k, q=q,
                            kappa_hat=kappa_hat, lambda_bar=lambda_bar)


def check_integrability(params):
    """Truth of the three local-integrability constraints.

    I:   kappa + n > 0 (locally finite mass)
    II:  lam < 1 + kappa + n
    III: lam < 1 + (kappa + n)/2
    I and III together imply II; the implication is recorded by the
    caller's tests, not enforced here.
    """
    s = params.kappa + params.n
    return {
        "I": s > 0.0,
        "II": params.lam < 1.0 + s,
        "III": params.lam < 1.0 + s / 2.0,
    }


def param_vector(params):
    """Scalar pack (n, lam, V_star, alpha, k1, k2, k3) fed to the kernels."""
    dc = derive_constants(params)
    return (float(params.n), float(params.lam), dc.V_star, dc.alpha,
            dc.k1, dc.k2, dc.k3)


def as_float_tuple(params):
    return (float(params.n), float(params.gamma), float(params.lam),
            float(params.kappa))


__all__ = [
    "SimilarityParams", "DerivedConstants", "derive_constants",
    "check_integrability", "isentropic_kappa", "param_vector",
]
