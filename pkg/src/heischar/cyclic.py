"""Periodic cyclic chains over an abstract unital coefficient algebra.

Chains are finite combinations of elementary tensors a_0 (x) ... (x) a_l
with slots 1..l normalized modulo scalar multiples of the unit.  The
boundary is b + uB with u the formal degree -2 bookkeeping variable; a
periodic chain of parity i keeps the finite window of u^m coefficients,
m = 0..L, with chain degree i + 2m at level m.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .scalars import QI


class NumberAlgebra:
    """Plain scalars (QI kept exact, complex accepted) as a coefficient algebra."""

    def unit(self):
        return QI(1)

    def zero(self):
        return QI(0)

    def add(self, x, y):
        if isinstance(x, QI) and isinstance(y, QI):
            return x + y
        return self._c(x) + self._c(y)

    def scale(self, x, c):
        if isinstance(x, QI) and isinstance(c, (QI, int, Fraction)):
            return x * QI.of(c)
        return self._c(x) * self._c(c)

    def mul(self, x, y):
        return self.scale(x, y)

    def neg(self, x):
        return self.scale(x, -1)

    @staticmethod
    def _c(x):
        return complex(x) if not isinstance(x, complex) else x

    def is_zero(self, x):
        if isinstance(x, QI):
            return x.is_zero()
        return abs(self._c(x)) == 0.0

    def eq(self, x, y):
        if isinstance(x, QI) and isinstance(y, QI):
            return x == y
        return self._c(x) == self._c(y)

    def scalar_part(self, x):
        return x

    def norm(self, x):
        return abs(self._c(x))

    def inv_matrix(self, mat, reverse: bool = False):
        return mat_inv_scalar(self, mat)

    def functional(self, seed: int, kill_unit: bool):
        w = QI(Fraction(2 + (seed * 7919) % 23, 3 + (seed * 104729) % 11))

        def f(x):
            if kill_unit:
                return QI(0) if isinstance(x, QI) else 0j
            return _coeff_mul(x, w)
        return f


class MatrixAlgebra:
    """q x q matrices with QI (or complex) entries as the coefficient algebra."""

    def __init__(self, q: int):
        self.q = q

    def unit(self):
        return tuple(tuple(QI(1) if i == j else QI(0) for j in range(self.q))
                     for i in range(self.q))

    def zero(self):
        return tuple(tuple(QI(0) for _ in range(self.q)) for _ in range(self.q))

    @staticmethod
    def element(rows):
        return tuple(tuple(QI.of(v) if not isinstance(v, complex) else v
                           for v in row) for row in rows)

    def add(self, x, y):
        return tuple(tuple(_coeff_add(a, b) for a, b in zip(r1, r2))
                     for r1, r2 in zip(x, y))

    def scale(self, x, c):
        return tuple(tuple(_coeff_mul(a, c) for a in row) for row in x)

    def neg(self, x):
        return self.scale(x, -1)

    def mul(self, x, y):
        q = self.q
        return tuple(tuple(
            _sum_coeffs(_coeff_mul(x[i][t], y[t][j]) for t in range(q))
            for j in range(q)) for i in range(q))

    def is_zero(self, x):
        return all(_coeff_zero(v) for row in x for v in row)

    def eq(self, x, y):
        return all(_coeff_eq(a, b) for r1, r2 in zip(x, y) for a, b in zip(r1, r2))

    def scalar_part(self, x):
        tr = _sum_coeffs(x[i][i] for i in range(self.q))
        return _coeff_mul(tr, Fraction(1, self.q))

    def norm(self, x):
        return max(abs(complex(v)) if isinstance(v, QI) else abs(v)
                   for row in x for v in row)

    def inv_element(self, x):
        inner = NumberAlgebra()
        rows = mat_inv_scalar(inner, [list(r) for r in x])
        return tuple(tuple(r) for r in rows)

    def inv_matrix(self, mat, reverse: bool = False):
        """Blockwise inverse by flattening to scalars."""
        Q = len(mat) * self.q
        inner = NumberAlgebra()
        flat = [[mat[I // self.q][J // self.q][I % self.q][J % self.q]
                 for J in range(Q)] for I in range(Q)]
        inv = mat_inv_scalar(inner, flat)
        out = [[tuple(tuple(inv[i * self.q + a][j * self.q + b]
                            for b in range(self.q)) for a in range(self.q))
                for j in range(len(mat))] for i in range(len(mat))]
        return out

    def functional(self, seed: int, kill_unit: bool):
        rngv = [[QI(Fraction(1 + (seed * 31 + 17 * i + 5 * j) % 13,
                             2 + (seed * 7 + i + 3 * j) % 7))
                 for j in range(self.q)] for i in range(self.q)]
        if kill_unit:
            tr = _sum_coeffs(rngv[i][i] for i in range(self.q))
            adj = _coeff_mul(tr, Fraction(1, self.q))
            for i in range(self.q):
                rngv[i][i] = _coeff_add(rngv[i][i], _neg_c(adj))

        def f(x):
            return _sum_coeffs(_coeff_mul(x[i][j], rngv[i][j])
                               for i in range(self.q) for j in range(self.q))
        return f


def _coeff_eq(a, b):
    if isinstance(a, QI) and isinstance(b, QI):
        return a == b
    return _as_c(a) == _as_c(b)


def _sum_coeffs(it):
    acc = None
    for v in it:
        acc = v if acc is None else _coeff_add(acc, v)
    return acc if acc is not None else QI(0)


def mat_mul(alg, A, B, reverse=False):
    q = len(A)
    out = []
    for i in range(q):
        row = []
        for j in range(q):
            acc = alg.zero()
            for t in range(q):
                p = alg.mul(B[t][j], A[i][t]) if reverse else alg.mul(A[i][t], B[t][j])
                acc = alg.add(acc, p)
            row.append(acc)
        out.append(row)
    return out


def mat_identity(alg, q):
    return [[alg.unit() if i == j else alg.zero() for j in range(q)] for i in range(q)]


def mat_add(alg, A, B, sign=1):
    return [[alg.add(a, alg.scale(b, sign)) for a, b in zip(r1, r2)]
            for r1, r2 in zip(A, B)]


def mat_scale(alg, A, c):
    return [[alg.scale(a, c) for a in row] for row in A]


def mat_inv_scalar(alg, A):
    """Exact Gauss inverse for matrices of scalar-like entries."""
    q = len(A)
    M = [[A[i][j] for j in range(q)] + [alg.unit() if i == j else alg.zero()
                                        for j in range(q)] for i in range(q)]
    for col in range(q):
        piv = next((r for r in range(col, q) if not alg.is_zero(M[r][col])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        if isinstance(pv, QI):
            pinv = pv.inv()
        else:
            pinv = 1.0 / pv
        M[col] = [alg.mul(pinv, v) for v in M[col]]
        for r in range(q):
            if r != col and not alg.is_zero(M[r][col]):
                f = M[r][col]
                M[r] = [alg.add(a, alg.neg(alg.mul(f, b)))
                        for a, b in zip(M[r], M[col])]
    return [row[q:] for row in M]


# --------------------------------------------------------------------------
# chains
# --------------------------------------------------------------------------

class Chain:
    """Degree-l chain: list of (coefficient, (a_0, ..., a_l)) terms."""

    def __init__(self, alg, degree: int, terms=None, normalize: bool = True):
        self.alg = alg
        self.degree = degree
        self.terms = []
        for coeff, slots in (terms or []):
            if _coeff_zero(coeff):
                continue
            slots = tuple(slots)
            assert len(slots) == degree + 1
            if normalize:
                coeff, slots = self._normalize(coeff, slots)
                if slots is None:
                    continue
            self.terms.append((coeff, slots))
        self._combine()

    def _normalize(self, coeff, slots):
        alg = self.alg
        if alg.is_zero(slots[0]):
            return coeff, None
        out = [slots[0]]
        for a in slots[1:]:
            s = alg.scalar_part(a)
            if not _coeff_zero(s):
                a = alg.add(a, alg.scale(alg.unit(), _neg_c(s)))
            if alg.is_zero(a):
                return coeff, None
            out.append(a)
        return coeff, tuple(out)

    def _combine(self):
        merged = []
        for coeff, slots in self.terms:
            hit = False
            for i, (c2, s2) in enumerate(merged):
                if len(slots) == len(s2) and all(
                        self.alg.eq(a, b) for a, b in zip(slots, s2)):
                    merged[i] = (_coeff_add(c2, coeff), s2)
                    hit = True
                    break
            if not hit:
                merged.append((coeff, slots))
        self.terms = [(c, s) for c, s in merged if not _coeff_zero(c)]

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        assert self.degree == other.degree
        return Chain(self.alg, self.degree, self.terms + other.terms,
                     normalize=False)

    def scale(self, c):
        return Chain(self.alg, self.degree,
                     [(_coeff_mul(t, c), s) for t, s in self.terms],
                     normalize=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def norm(self) -> float:
        total = 0.0
        for c, slots in self.terms:
            v = abs(complex(c)) if not isinstance(c, float) else abs(c)
            for a in slots:
                v *= max(self.alg.norm(a), 1e-30)
            total += v
        return total

    def pair(self, fns):
        """Contract against one linear functional per slot position."""
        acc = None
        for coeff, slots in self.terms:
            v = coeff
            for f, a in zip(fns, slots):
                v = _coeff_mul(v, f(a))
            acc = v if acc is None else _coeff_add(acc, v)
        return acc if acc is not None else QI(0)

    def class_residual(self, trials: int = 8, seed0: int = 0) -> float:
        """Largest pairing against random functionals killing the unit in
        slots >= 1; zero iff the chain vanishes in the normalized complex
        (up to the usual random-functional caveat)."""
        if not self.terms:
            return 0.0
        worst = 0.0
        for t in range(trials):
            fns = [self.alg.functional(seed0 + 31 * t + 7 * pos, pos >= 1)
                   for pos in range(self.degree + 1)]
            worst = max(worst, abs(complex(self.pair(fns))))
        return worst

    def __repr__(self):
        return f"Chain(deg={self.degree}, {len(self.terms)} terms)"


def _coeff_zero(c):
    if isinstance(c, QI):
        return c.is_zero()
    return c == 0

def _neg_c(c):

    return -c if not isinstance(c, QI) else QI(0) - c

def _coeff_add(a, b):
    if isinstance(a, QI) and isinstance(b, QI):
        return a + b
    return _as_c(a) + _as_c(b)

def _coeff_mul(a, b):
    if isinstance(a, QI) and isinstance(b, (QI, int, Fraction)):
        return a * QI.of(b)
    if isinstance(b, QI) and isinstance(a, (int, Fraction)):
        return QI.of(a) * b
    return _as_c(a) * _as_c(b)

def _as_c(x):
    if isinstance(x, (QI, Fraction)):
        return complex(x)
    return x


def hochschild_b(c: Chain) -> Chain:
    """Alternating contraction including the wrap-around term."""
    alg = c.alg
    l = c.degree
    if l == 0:
        return Chain(alg, 0, [])
    out = []
    for coeff, slots in c.terms:
        for i in range(l):
            merged = slots[:i] + (alg.mul(slots[i], slots[i + 1]),) + slots[i + 2:]
            out.append((_coeff_mul(coeff, (-1) ** i), merged))
        wrap = (alg.mul(slots[l], slots[0]),) + slots[1:l]
        out.append((_coeff_mul(coeff, (-1) ** l), wrap))
    return Chain(alg, l - 1, out)


def connes_B(c: Chain) -> Chain:
    """Unit insertion with cyclic symmetrization, signs (-1)^{l i}."""
    alg = c.alg
    l = c.degree
    out = []
    for coeff, slots in c.terms:
        for i in range(l + 1):
            word = (alg.unit(),) + slots[i:] + slots[:i]
            out.append((_coeff_mul(coeff, (-1) ** (l * i)), word))
    return Chain(alg, l + 1, out)


class PerChain:
    """Parity i window of u^m coefficients, m = 0..L, degree i + 2m."""

    def __init__(self, alg, parity: int, L: int, comps=None, flags=None):
        self.alg = alg
        self.parity = parity % 2
        self.L = L
        self.comps = {}
        self.flags = set(flags or ())
        for m, ch in (comps or {}).items():
            if ch.is_zero():
                continue
            assert ch.degree == self.parity + 2 * m, "degree/parity mismatch"
            if m > L:
                self.flags.add("truncation_loss")
                continue
            self.comps[m] = ch

    def component(self, m: int) -> Chain:
        if m in self.comps:
            return self.comps[m]
        return Chain(self.alg, self.parity + 2 * m, [])

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        assert self.parity == other.parity
        L = min(self.L, other.L)
        out = {}
        for m in set(self.comps) | set(other.comps):
            if m > L:
                continue
            out[m] = self.component(m) + other.component(m)
        return PerChain(self.alg, self.parity, L, out,
                        self.flags | other.flags)

    def scale(self, c):
        return PerChain(self.alg, self.parity, self.L,
                        {m: ch.scale(c) for m, ch in self.comps.items()},
                        self.flags)

    def __sub__(self, other):
        return self + other.scale(-1)

    def norm(self) -> float:
        return sum(ch.norm() for ch in self.comps.values())

    def class_residual(self, trials: int = 8, seed0: int = 0,
                       max_level: int = None) -> float:
        return max((ch.class_residual(trials, seed0)
                    for m, ch in self.comps.items()
                    if max_level is None or m <= max_level), default=0.0)

    def drop_top(self, keep: int) -> "PerChain":
        return PerChain(self.alg, self.parity, keep,
                        {m: ch for m, ch in self.comps.items() if m <= keep},
                        self.flags)

    def __repr__(self):
        return (f"PerChain(parity={self.parity}, L={self.L}, "
                f"m={sorted(self.comps)}, flags={self.flags})")


def per_boundary(z: PerChain) -> PerChain:
    """b + uB, dropping (and flagging) the B-image beyond the u-window.

    Levels reindex with the parity flip: for parity-1 input u^m C_{1+2m}
    maps to levels (m, m+1); for parity-0 input to levels (m-1, m).
    """
    out: dict[int, Chain] = {}
    flags = set(z.flags)
    shift_b = 0 if z.parity == 1 else -1
    for m, ch in z.comps.items():
        bpart = hochschild_b(ch)
        if not bpart.is_zero():
            mb = m + shift_b
            assert mb >= 0
            out[mb] = out.get(mb, Chain(z.alg, bpart.degree, [])) + bpart
        Bpart = connes_B(ch)
        if not Bpart.is_zero():
            mB = m + shift_b + 1
            if mB > z.L:
                flags.add("truncation_loss")
            else:
                out[mB] = out.get(mB, Chain(z.alg, Bpart.degree, [])) + Bpart
    return PerChain(z.alg, z.parity - 1, z.L, out, flags)


# --------------------------------------------------------------------------
# Chern character and transgression
# --------------------------------------------------------------------------

def _trace_word(alg, matrices, degree) -> Chain:
    """Matrix-trace reduction of a tensor word of matrices over alg."""
    import itertools
    q = len(matrices[0])
    k = len(matrices)
    terms = []
    for cycle in itertools.product(range(q), repeat=k):
        slots = []
        for pos in range(k):
            i = cycle[pos]
            j = cycle[(pos + 1) % k]
            slots.append(matrices[pos][i][j])
        terms.append((QI(1), tuple(slots)))
    return Chain(alg, degree, terms)


def chern(alg, r, L: int, rinv=None, reverse: bool = False) -> PerChain:
    """Odd Chern character of an invertible matrix over the algebra.

    -(1/2 pi i) sum_l (-1)^l l! u^l tr (r^{-1} (x) r)^{(x)(l+1)}, truncated
    at u^L.  `reverse` multiplies in the opposite algebra throughout.
    """
    if rinv is None:
        rinv = alg.inv_matrix(r, reverse=reverse)
    pref = -1 / (2j * math.pi)
    comps = {}
    for l in range(L + 1):
        mats = []
        for _ in range(l + 1):
            mats.extend([rinv, r])
        word = _trace_word(alg, mats, 2 * l + 1)
        coeff = pref * ((-1) ** l) * math.factorial(l)
        comps[l] = word.scale(coeff)
    return PerChain(alg, 1, L, comps)


class InvertiblePath:
    """Piecewise-smooth path of invertible matrices with exact derivative."""

    def __init__(self, alg, r_of_t, dr_of_t, q: int, reverse: bool = False):
        self.alg = alg
        self.r_of_t = r_of_t
        self.dr_of_t = dr_of_t
        self.q = q
        self.reverse = reverse

    def at(self, t):
        r = self.r_of_t(t)
        return r, self.alg.inv_matrix(r, reverse=self.reverse), self.dr_of_t(t)


def gauss_legendre_rational(order: int, panels: int = 1):
    """Rationalized Gauss-Legendre rule on [0,1]; exact node arithmetic."""
    gx, gw = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for p in range(panels):
        a = Fraction(p, panels)
        for xg, wg in zip(gx, gw):
            t = a + (Fraction(xg).limit_denominator(10**15) + 1) / (2 * panels)
            nodes.append(t)
            weights.append(Fraction(wg).limit_denominator(10**15) / (2 * panels))
    return nodes, weights


def tch(path: InvertiblePath, L: int, order: int = 16, panels: int = 1) -> PerChain:
    """Transgression chain of a path of invertibles (parity 0)."""
    alg = path.alg
    nodes, weights = gauss_legendre_rational(order, panels)
    pref = -1 / (2j * math.pi)
    comps: dict[int, Chain] = {}

    def add(m, chain):
        if m in comps:
            comps[m] = comps[m] + chain
        else:
            comps[m] = chain

    for t, wq in zip(nodes, weights):
        r, rinv, dr = path.at(t)
        rdr = mat_mul(alg, rinv, dr, reverse=path.reverse)
        # degree-0 slot: tr(r^{-1} dr/dt)
        word0 = _trace_word(alg, [rdr], 0)
        add(0, word0.scale(pref * float(wq)))
        for l in range(L):
            m = l + 1
            if m > L:
                break
            coeff = pref * ((-1) ** (l + 1)) * math.factorial(l) * float(wq)
            for j in range(l + 1):
                mats = []
                for _ in range(j + 1):
                    mats.extend([rinv, r])
                mats.append(rdr)
                for _ in range(l - j):
                    mats.extend([rinv, r])
                word = _trace_word(alg, mats, 2 * l + 2)
                add(m, word.scale(coeff))
    return PerChain(alg, 0, L, comps)
