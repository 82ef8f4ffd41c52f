"""Ladder-operator realisation of Weyl quantization on the Hermite basis.

Works for one degree of freedom.  Every computation here is exact: normal
ordering happens over Gaussian rationals, and diagonals come out as exact
polynomials in the level index k.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import Poly
from .scalars import QI


class NormalOrdered:
    """Operator sum {(p, q): c} meaning sum c * adag^p a^q."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                c = QI.of(c)
                if not c.is_zero():
                    self.terms[key] = c

    @staticmethod
    def unit():
        return NormalOrdered({(0, 0): QI(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, QI(0)) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return NormalOrdered(out)

    def scale(self, c):
        return NormalOrdered({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        # a^q adag^r = sum_i C(q,i) C(r,i) i! adag^(r-i) a^(q-i)
        out = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in other.terms.items():
                for i in range(min(q1, p2) + 1):
                    coef = c1 * c2 * (math.comb(q1, i) * math.comb(p2, i)
                                      * math.factorial(i))
                    key = (p1 + p2 - i, q1 + q2 - i)
                    s = out.get(key, QI(0)) + coef
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
        return NormalOrdered(out)

    def diagonal_kpoly(self) -> "KPoly":
        """<k| . |k> as an exact polynomial in k (falling factorials)."""
        acc = KPoly([])
        for (p, q), c in self.terms.items():
            if p != q:
                continue
            acc = acc + KPoly.falling(q).scale(c)
        return acc

    def dense(self, size: int):
        import numpy as np
        M = np.zeros((size, size), dtype=complex)
        for (p, q), c in self.terms.items():
            for k in range(size):
                if k - q < 0 or k - q + p >= size:
                    continue
                amp = math.sqrt(math.factorial(k) / math.factorial(k - q))
                amp *= math.sqrt(math.factorial(k - q + p) / math.factorial(k - q))
                M[k - q + p, k] += complex(c) * amp
        return M


class KPoly:
    """Polynomial in the level index k with QI coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [QI.of(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def falling(q: int) -> "KPoly":
        """k(k-1)...(k-q+1)."""
        poly = KPoly([QI(1)])
        for j in range(q):
            poly = poly.mul_linear(QI(1), QI(-j))
        return poly

    def mul_linear(self, a: QI, b: QI) -> "KPoly":
        """Multiply by (a*k + b)."""
        n = len(self.coeffs)
        out = [QI(0)] * (n + 1)
        for i, c in enumerate(self.coeffs):
            out[i + 1] = out[i + 1] + a * c
            out[i] = out[i] + b * c
        return KPoly(out)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return KPoly([(self.coeffs[i] if i < len(self.coeffs) else QI(0))
                      + (other.coeffs[i] if i < len(other.coeffs) else QI(0))
                      for i in range(n)])

    def __sub__(self, other):
        return self + other.scale(QI(-1))

    def scale(self, c):
        return KPoly([v * c for v in self.coeffs])

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    def eval(self, k) -> QI:
        acc = QI(0)
        for c in reversed(self.coeffs):
            acc = acc * QI(k) + c
        return acc

    def basis_2kp1(self):
        """Coefficients e_j with p(k) = sum_j e_j (2k+1)^j."""
        # k = ((2k+1) - 1) / 2, substitute and expand
        out = [QI(0)] * max(1, len(self.coeffs))
        # compute ((u-1)/2)^i in u = 2k+1
        pow_cache = [[QI(1)]]
        for i in range(1, len(self.coeffs)):
            prev = pow_cache[-1]
            nxt = [QI(0)] * (len(prev) + 1)
            for j, c in enumerate(prev):
                nxt[j + 1] = nxt[j + 1] + c * Fraction(1, 2)
                nxt[j] = nxt[j] - c * Fraction(1, 2)
            pow_cache.append(nxt)
        for i, c in enumerate(self.coeffs):
            for j, b in enumerate(pow_cache[i]):
                out[j] = out[j] + c * b
        while out and out[-1].is_zero():
            out.pop()
        return out

    def __eq__(self, other):
        return isinstance(other, KPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return "KPoly(" + ", ".join(map(str, self.coeffs)) + ")"


def weyl_normal_ordered(p: Poly) -> NormalOrdered:
    """Normal-ordered form of the Weyl quantization of a polynomial on R^2.

    Monomials of odd total degree are rejected (they carry sqrt(2) factors
    and vanish on all objects of interest here).
    """
    if p.nvars != 2:
        raise ValueError("ladder oracle is one-dimensional")
    # sqrt(2) x = a + adag ; sqrt(2) xi = i adag - i a
    X = NormalOrdered({(1, 0): QI(1), (0, 1): QI(1)})
    XI = NormalOrdered({(1, 0): QI(0, 1), (0, 1): QI(0, -1)})
    out = NormalOrdered()
    for (ex, exi), c in p.terms.items():
        if (ex + exi) % 2:
            raise ValueError("odd total degree monomial has no exact rational form")
        # McCoy symmetrization: q^m p^n -> 2^-n sum_r C(n,r) p^r q^m p^(n-r)
        term = NormalOrdered()
        xi_pows = [NormalOrdered.unit()]
        for _ in range(exi):
            xi_pows.append(xi_pows[-1] * XI)
        x_pow = NormalOrdered.unit()
        for _ in range(ex):
            x_pow = x_pow * X
        for r in range(exi + 1):
            piece = xi_pows[r] * x_pow * xi_pows[exi - r]
            term = term + piece.scale(Fraction(math.comb(exi, r), 2 ** exi))
        scale = c * Fraction(1, 2 ** ((ex + exi) // 2))
        out = out + term.scale(scale)
    return out


def hermite_diagonal(p: Poly) -> KPoly:
    """Exact diagonal <k|Op^w(p)|k> for an even-degree polynomial symbol.

    Odd-degree monomials contribute nothing to the diagonal and are
    silently dropped.
    """
    even = Poly(p.nvars, {e: c for e, c in p.terms.items() if sum(e) % 2 == 0})
    if even.is_zero():
        return KPoly([])
    return weyl_normal_ordered(even).diagonal_kpoly()


def op_dense(p: Poly, size: int):
    """Truncated Hermite-basis matrix of Op^w(p); numeric, for cross-checks."""
    even = Poly(p.nvars, {e: c for e, c in p.terms.items() if sum(e) % 2 == 0})
    return weyl_normal_ordered(even).dense(size)
