"""Exact multivariate polynomials with Gaussian-rational coefficients.

Exponent tuples are the dict keys, mirroring the coordinate order
(x_1..x_n, xi_1..xi_n) used throughout the symbol calculus.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .scalars import QI


class Poly:
    """Polynomial in `nvars` variables, stored as {exponents: QI}."""

    __slots__ = ("nvars", "terms", "_iform")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self._iform = None
        clean = {}
        if terms:
            for e, c in terms.items():
                c = QI.of(c)
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean

    @staticmethod
    def _raw(nvars: int, terms: dict) -> "Poly":
        """Trusted constructor: terms already {tuple: nonzero QI}."""
        p = Poly.__new__(Poly)
        p.nvars = nvars
        p.terms = terms
        p._iform = None
        return p

    def _int_form(self):
        """(den, {exps: (int re, int im)}) over a common denominator."""
        if self._iform is None:
            den = 1
            for c in self.terms.values():
                den = den * c.re.denominator // math.gcd(den, c.re.denominator)
                den = den * c.im.denominator // math.gcd(den, c.im.denominator)
            self._iform = (den, {
                e: (c.re.numerator * (den // c.re.denominator),
                    c.im.numerator * (den // c.im.denominator))
                for e, c in self.terms.items()})
        return self._iform

    # ------------------------------------------------------------ builders
    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        return Poly(nvars, {(0,) * nvars: QI.of(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): QI(1)})

    @staticmethod
    def monomial(exps, c=QI(1)) -> "Poly":
        return Poly(len(exps), {tuple(exps): QI.of(c)})

    def copy_terms(self):
        return dict(self.terms)

    # ------------------------------------------------------------ queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        """Return the common total degree, or None if inhomogeneous/zero."""
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def constant_term(self) -> QI:
        return self.terms.get((0,) * self.nvars, QI(0))

    def leading_key(self):
        """Lexicographically largest exponent tuple among highest degree."""
        if not self.terms:
            return None
        d = self.degree()
        return max(e for e in self.terms if sum(e) == d)

    # ------------------------------------------------------------ algebra
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        d1, t1 = self._int_form()
        d2, t2 = other._int_form()
        den = d1 * d2
        acc: dict[tuple, list] = {}
        two = self.nvars == 2
        for e1, (a1, b1) in t1.items():
            for e2, (a2, b2) in t2.items():
                if two:
                    e = (e1[0] + e2[0], e1[1] + e2[1])
                else:
                    e = tuple(x + y for x, y in zip(e1, e2))
                re = a1 * a2 - b1 * b2
                im = a1 * b2 + b1 * a2
                slot = acc.get(e)
                if slot is None:
                    acc[e] = [re, im]
                else:
                    slot[0] += re
                    slot[1] += im
        out = {}
        for e, (re, im) in acc.items():
            if re or im:
                out[e] = QI(Fraction(re, den), Fraction(im, den))
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = QI.of(c)
        if c.is_zero():
            return Poly(self.nvars)
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        out = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return (self - Poly.constant(self.nvars, other)).is_zero()
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def conj(self) -> "Poly":
        return Poly(self.nvars, {e: c.conj() for e, c in self.terms.items()})

    # ------------------------------------------------------------ calculus
    def partial(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
        return Poly._raw(self.nvars, out)

    def partial_multi(self, exps) -> "Poly":
        p = self
        for i, k in enumerate(exps):
            for _ in range(k):
                p = p.partial(i)
                if p.is_zero():
                    return p
        return p

    def compose_linear(self, mat) -> "Poly":
        """p(M v): substitute v_i -> sum_j M[i][j] v_j (entries QI-able)."""
        n = self.nvars
        rows = [
            Poly(n, {tuple(1 if k == j else 0 for k in range(n)): QI.of(mat[i][j])
                     for j in range(n) if not QI.of(mat[i][j]).is_zero()})
            for i in range(n)
        ]
        out = Poly(n)
        cache: dict[tuple[int, int], Poly] = {}

        def row_pow(i, k):
            if k == 0:
                return Poly.constant(n, 1)
            if (i, k) not in cache:
                cache[(i, k)] = row_pow(i, k - 1) * rows[i]
            return cache[(i, k)]

        for e, c in self.terms.items():
            t = Poly.constant(n, c)
            for i, k in enumerate(e):
                if k:
                    t = t * row_pow(i, k)
            out = out + t
        return out

    def eval_complex(self, point) -> complex:
        total = 0j
        for e, c in self.terms.items():
            v = complex(c)
            for xi, k in zip(point, e):
                if k:
                    v *= xi ** k
            total += v
        return total

    # ------------------------------------------------------------ division
    def try_divide(self, d: "Poly"):
        """Exact division self/d in lex order; None if not divisible."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = self
        quot = Poly(self.nvars)
        dk = d.leading_key()
        dc = d.terms[dk]
        guard = 0
        while not rem.is_zero():
            guard += 1
            if guard > 10000:
                return None
            rk = rem.leading_key()
            diff = tuple(a - b for a, b in zip(rk, dk))
            if any(x < 0 for x in diff):
                return None
            c = rem.terms[rk] / dc
            mono = Poly.monomial(diff, c)
            quot = quot + mono
            rem = rem - mono * d
        return quot

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"v{i}^{k}" for i, k in enumerate(e) if k)
            bits.append(f"({c}){mono if mono else ''}")
        return " + ".join(bits)


def rho2(nvars: int) -> Poly:
    """Sum of squares of all coordinates."""
    terms = {}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = 2
        terms[tuple(e)] = QI(1)
    return Poly(nvars, terms)


def grid_points(nvars: int, count: int):
    """Deterministic points on the unit sphere S^{nvars-1} for sign checks."""
    import math

    pts = []
    if nvars == 2:
        for j in range(count):
            t = 2 * math.pi * (j + 0.31) / count
            pts.append((math.cos(t), math.sin(t)))
        return pts
    # low-discrepancy-ish directions for higher dimension
    seed = 0.5
    for j in range(count):
        vec = []
        for i in range(nvars):
            seed = math.fmod(seed * 9301.0 + 49297.0 * (i + 1) + j * 233.0, 233280.0)
            vec.append(seed / 233280.0 - 0.5)
        norm = math.sqrt(sum(v * v for v in vec)) or 1.0
        pts.append(tuple(v / norm for v in vec))
    return pts
