"""Zeta constants and the exact meromorphic model for spectral zetas.

The odd-integer Dirichlet series sum_k (2k+1)^{-s} factors as
lambda(s) = (1 - 2^{-s}) zeta_R(s), so a diagonal that is polynomial in
(2k+1) has the closed continuation

    zeta(z) = sum_j e_j (1 - 2^{j-z}) zeta_R(z - j),

with poles only at z = j+1 and exact rational values at z = 0.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .oscillator import KPoly
from .scalars import QI

mp.mp.dps = 40


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    total = Fraction(0)
    for j in range(n):
        total += Fraction(math.comb(n + 1, j)) * bernoulli(j)
    return -total / (n + 1)


@lru_cache(maxsize=None)
def euler_number(n: int) -> Fraction:
    """Euler numbers E_n (E_0=1, E_2=-1, ...); odd ones vanish."""
    if n == 0:
        return Fraction(1)
    if n % 2:
        return Fraction(0)
    total = Fraction(0)
    for j in range(0, n, 2):
        total += Fraction(math.comb(n, j)) * euler_number(j)
    return -total


def zeta_R_neg(j: int) -> Fraction:
    """zeta_R(-j) for integer j >= 0."""
    if j == 0:
        return Fraction(-1, 2)
    return -bernoulli(j + 1) / (j + 1)


def lambda_value_at0(j: int) -> Fraction:
    """Value at z = 0 of (1 - 2^{j-z}) zeta_R(z - j), j >= 0 integer."""
    return (1 - Fraction(2) ** j) * zeta_R_neg(j)


def beta_value_neg(j: int) -> Fraction:
    """Dirichlet beta at -j: sum (-1)^k (2k+1)^{j} regularized, = E_j / 2."""
    return euler_number(j) / 2


GAMMA_LN2_HALF = float((mp.euler + mp.log(2)) / 2)


def lambda_numeric(z) -> complex:
    return complex((1 - mp.power(2, -z)) * mp.zeta(z))


def beta_numeric(z) -> complex:
    """Dirichlet beta via Hurwitz zeta: 4^{-z}(zeta(z,1/4) - zeta(z,3/4))."""
    if z == 1:
        return complex(mp.pi / 4)
    return complex(mp.power(4, -z) * (mp.zeta(z, Fraction(1, 4))
                                      - mp.zeta(z, Fraction(3, 4))))


def smooth_ct_at0(j: int):
    """Constant term at z=0 of sum_k (2k+1)^{j-z}.

    Exact Fraction for j >= 0; the j = -1 series has a pole at z = 0 whose
    constant term is (euler_gamma + log 2)/2; deeper j converge outright.
    """
    if j >= 0:
        return lambda_value_at0(j)
    if j == -1:
        return GAMMA_LN2_HALF
    return lambda_numeric(-j).real


def alternating_ct_at0(j: int):
    """Constant term at z=0 of sum_k (-1)^k (2k+1)^{j-z} (entire in z)."""
    if j >= 0:
        return beta_value_neg(j)
    return beta_numeric(-j).real


class ZetaModel:
    """Finite combination sum_j e_j (1-2^{j-z}) zeta_R(z-j)."""

    def __init__(self, terms, provenance: str = ""):
        self.terms = [(QI.of(e), int(j)) for e, j in terms if not QI.of(e).is_zero()]
        self.provenance = provenance

    @staticmethod
    def from_kpoly(d: KPoly, provenance: str = "") -> "ZetaModel":
        return ZetaModel(list(zip(d.basis_2kp1(), range(len(d.basis_2kp1())))),
                         provenance)

    def evaluate(self, z) -> complex:
        total = 0j
        for e, j in self.terms:
            total += complex(e) * complex((1 - mp.power(2, j - z)) * mp.zeta(z - j))
        return total

    def dirichlet_partial(self, z, kmax: int) -> complex:
        total = 0j
        for k in range(kmax + 1):
            d = sum(complex(e) * (2 * k + 1) ** j for e, j in self.terms)
            total += d * (2 * k + 1) ** (-z)
        return total

    def poles(self):
        return sorted(j + 1 for _, j in self.terms)

    def trh_value(self) -> QI:
        """Constant term at z = 0 (the pole set never touches 0 for j >= 0)."""
        acc = QI(0)
        for e, j in self.terms:
            if j < 0:
                raise ValueError("negative basis power in polynomial model")
            acc = acc + e * QI(lambda_value_at0(j))
        return acc

    def residue_at0(self) -> QI:
        for e, j in self.terms:
            if j == -1:
                return e * QI(Fraction(1, 2))
        return QI(0)

    def __repr__(self):
        body = " + ".join(f"({e})(1-2^({j}-z))zeta(z-{j})" for e, j in self.terms)
        return f"ZetaModel[{self.provenance}]: {body or '0'}"
