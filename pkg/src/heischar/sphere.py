"""Integration over the unit sphere S^{2n-1}.

Monomials integrate in closed form,

    int_{S^{d-1}} theta^alpha dtheta
        = 2 prod_i Gamma((alpha_i+1)/2) / Gamma((|alpha|+d)/2),

nonzero only for all-even alpha.  For d = 2n and even alpha the value is
pi^n times a rational, so the rho-power-denominator path is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .homog import HomogRat
from .poly import Poly
from .scalars import QI


class QuadratureNotConverged(ArithmeticError):
    pass


def _uv_mul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = (k1[0] + k2[0], k1[1] + k2[1])
            cur = out.get(k, QI(0)) + v1 * v2
            if cur.is_zero():
                out.pop(k, None)
            else:
                out[k] = cur
    return out


def _double_fact_ratio(a: int) -> Fraction:
    """Gamma(a + 1/2) / sqrt(pi) = (2a)! / (4^a a!)."""
    return Fraction(math.factorial(2 * a), 4**a * math.factorial(a))


def monomial_sphere_rational(alpha) -> Fraction:
    """Rational r with int_{S^{d-1}} theta^alpha dtheta = r * pi^(d/2), d even."""
    d = len(alpha)
    assert d % 2 == 0
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = Fraction(2)
    for a in alpha:
        num *= _double_fact_ratio(a // 2)
    total = sum(alpha)
    num /= math.factorial((total + d) // 2 - 1)
    return num


def uv_decompose(p: Poly):
    """Exponents of (x + i xi)^a (x - i xi)^b for a one-freedom polynomial."""
    out: dict[tuple, QI] = {}
    for (ex, exi), c in p.terms.items():
        base = {(0, 0): c}
        for _ in range(ex):
            base = _uv_mul(base, {(1, 0): QI(Fraction(1, 2)),
                                  (0, 1): QI(Fraction(1, 2))})
        for _ in range(exi):
            base = _uv_mul(base, {(1, 0): QI(0, Fraction(-1, 2)),
                                  (0, 1): QI(0, Fraction(1, 2))})
        for k, v in base.items():
            cur = out.get(k, QI(0)) + v
            if cur.is_zero():
                out.pop(k, None)
            else:
                out[k] = cur
    return out


def sphere_integral_exact(h: HomogRat):
    """(QI multiple of pi^n) when the restriction is a trig polynomial.

    Covers rho-power denominators in any dimension and, for one degree of
    freedom, denominators that are monomials in (x +- i xi): unimodular
    phases on the circle.
    """
    p = h.den_rho_power
    if p is not None:
        acc = QI(0)
        for e, c in h.num.terms.items():
            acc = acc + c * QI(monomial_sphere_rational(e))
        return acc
    if h.nvars != 2:
        return None
    den_uv = uv_decompose(h.den)
    if len(den_uv) != 1:
        return None
    (A, B), dc = next(iter(den_uv.items()))
    acc = QI(0)
    for (a, b), c in uv_decompose(h.num).items():
        if a - A == b - B:
            acc = acc + c / dc
    # circle measure: mean of e^{i m theta} is delta_{m 0}; total length 2 pi
    return acc * QI(2)


class SphereQuadrature:
    """Numeric nodes/weights on S^{2n-1}; exact n=1 trigonometric rule."""

    def __init__(self, n: int, order: int = 256):
        self.n = n
        self.order = order
        if n == 1:
            self.nodes = [(math.cos(2 * math.pi * j / order),
                           math.sin(2 * math.pi * j / order))
                          for j in range(order)]
            self.weights = [2 * math.pi / order] * order
        else:
            import numpy as np
            # product rule: azimuthal trapezoids x Gauss-Legendre in polar angles
            self.nodes, self.weights = [], []
            gl_x, gl_w = np.polynomial.legendre.leggauss(order // 4)
            d = 2 * n
            if d != 4:
                raise NotImplementedError("quadrature implemented for n <= 2")
            m = order
            gl_y, gl_v = np.polynomial.legendre.leggauss(order // 2)
            # theta_1 by Gauss-Legendre in the angle (smooth sin^2 weight),
            # phi_1 in its cosine, phi_2 by trapezoid
            for xt, wt in zip(gl_x, gl_w):
                th1 = math.pi * (xt + 1) / 2
                s1 = math.sin(th1)
                c1 = math.cos(th1)
                for cj, wj in zip(gl_y, gl_v):
                    s2 = math.sqrt(max(0.0, 1 - cj * cj))
                    for k in range(m):
                        p2 = 2 * math.pi * k / m
                        self.nodes.append((c1,
                                           s1 * cj,
                                           s1 * s2 * math.cos(p2),
                                           s1 * s2 * math.sin(p2)))
                        self.weights.append(wt * (math.pi / 2) * s1 * s1
                                            * wj * (2 * math.pi / m))

    def integrate(self, fn) -> complex:
        return sum(w * fn(pt) for pt, w in zip(self.nodes, self.weights))


_QUADS: dict[int, SphereQuadrature] = {}


def sphere_integral(h: HomogRat, tol: float = 1e-9):
    """Integral of h over the sphere; exact value when available.

    Returns (value, err_estimate); exact path reports err 0.
    """
    n = h.nvars // 2
    exact = sphere_integral_exact(h)
    if exact is not None:
        return complex(exact) * math.pi ** n, 0.0
    if n not in _QUADS:
        _QUADS[n] = SphereQuadrature(n)
    quad = _QUADS[n]
    coarse = SphereQuadrature(n, quad.order // 2)
    v1 = quad.integrate(h.eval_complex)
    v0 = coarse.integrate(h.eval_complex)
    err = abs(v1 - v0)
    if err > max(tol, 1e-12 * (1 + abs(v1))) * 100:
        raise QuadratureNotConverged(f"sphere quadrature error {err:.2e}")
    return v1, err


def sphere_average(h: HomogRat) -> QI:
    """Mean value over the sphere; exact QI on the rho-power path."""
    n = h.nvars // 2
    area = monomial_sphere_rational((0,) * (2 * n))
    exact = sphere_integral_exact(h)
    if exact is not None:
        return exact / QI(area)
    val, _ = sphere_integral(h)
    val /= (float(area) * math.pi ** n)
    return QI(Fraction(val.real).limit_denominator(10**12),
              Fraction(val.imag).limit_denominator(10**12))
