"""The extension algebra of symbol triples and its canonical section.

An extension element is (w_plus, w_minus, r(t)): matrices of symbol
sections for the two ends and a polynomial-in-t path of series matrices
joining iota(lambda(w_minus)) at t = 0 to lambda(w_plus) at t = 1.  The
principal-symbol triple (w_plus, w_minus, f) only remembers the leading
term of the path; the canonical section rebuilds the linear path.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclic import mat_add, mat_mul, mat_scale
from .scalars import QI
from .torus import Section, SectionAlgebra, SymbolFiber
from .weyl import FormalSymbol, iota, NotInvertible


def symbol_algebra(d: int = 3, cutoff: int = 12, op: bool = False) -> SectionAlgebra:
    return SectionAlgebra(d, SymbolFiber(1, cutoff, op=op))


def lam_section(s: Section) -> Section:
    """Pass to the formal series class: drop spectral models, keep the series."""
    fib = SymbolFiber(s.fib.n, s.fib.cutoff_default, op=False)
    return Section(s.d, fib, {K: v.drop_model() for K, v in s.waves.items()})


def iota_lam_section(s: Section) -> Section:
    fib = SymbolFiber(s.fib.n, s.fib.cutoff_default, op=False)
    return Section(s.d, fib, {K: iota(v) for K, v in s.waves.items()})


def lam_matrix(mat):
    return [[lam_section(e) for e in row] for row in mat]


def iota_lam_matrix(mat):
    return [[iota_lam_section(e) for e in row] for row in mat]


class TPolyMatrix:
    """Polynomial in t with matrix-of-section coefficients."""

    def __init__(self, alg: SectionAlgebra, coeffs):
        self.alg = alg
        self.coeffs = list(coeffs)
        self.q = len(coeffs[0])

    def at(self, t):
        acc = None
        power = QI(1)
        for M in self.coeffs:
            term = mat_scale(self.alg, M, power)
            acc = term if acc is None else mat_add(self.alg, acc, term)
            power = power * QI(Fraction(t))
        return acc

    def deriv_at(self, t):
        acc = None
        power = QI(1)
        for j, M in enumerate(self.coeffs[1:], start=1):
            term = mat_scale(self.alg, M, power * QI(j))
            acc = term if acc is None else mat_add(self.alg, acc, term)
            power = power * QI(Fraction(t))
        if acc is None:
            acc = [[self.alg.zero() for _ in range(self.q)] for _ in range(self.q)]
        return acc

    def mul(self, other: "TPolyMatrix") -> "TPolyMatrix":
        n1, n2 = len(self.coeffs), len(other.coeffs)
        out = [None] * (n1 + n2 - 1)
        for i, A in enumerate(self.coeffs):
            for j, B in enumerate(other.coeffs):
                P = mat_mul(self.alg, A, B)
                out[i + j] = P if out[i + j] is None else mat_add(self.alg, out[i + j], P)
        return TPolyMatrix(self.alg, out)


class ExtensionElement:
    """(w_plus, w_minus, r(t)) with the endpoint compatibilities."""

    def __init__(self, wp, wm, r: TPolyMatrix, d: int = 3, cutoff: int = 12,
                 check: bool = True):
        self.wp = wp
        self.wm = wm
        self.r = r
        self.d = d
        self.cutoff = cutoff
        self.q = len(wp)
        self.alg_plus = symbol_algebra(d, cutoff, op=False)
        self.alg_minus = symbol_algebra(d, cutoff, op=True)
        self.alg_b = r.alg
        if check:
            self.check_endpoints()

    def check_endpoints(self):
        r1 = self.r.at(1)
        r0 = self.r.at(0)
        target1 = lam_matrix(self.wp)
        target0 = iota_lam_matrix(self.wm)
        for i in range(self.q):
            for j in range(self.q):
                if not self.alg_b.eq(r1[i][j], target1[i][j]):
                    raise ValueError("path end t=1 must be the plus series")
                if not self.alg_b.eq(r0[i][j], target0[i][j]):
                    raise ValueError("path end t=0 must be the twisted minus series")

    def mul(self, other: "ExtensionElement") -> "ExtensionElement":
        wp = mat_mul(self.alg_plus, self.wp, other.wp)
        wm = mat_mul(self.alg_minus, other.wm, self.wm)
        r = self.r.mul(other.r)
        return ExtensionElement(wp, wm, r, self.d, self.cutoff)

    def invert(self, nodes=None) -> "ExtensionElement":
        """Slotwise inverse; the path inverse is certified at sample nodes."""
        wp_inv = self.alg_plus.inv_matrix(self.wp)
        wm_inv = self.alg_minus.inv_matrix(self.wm)
        if len(self.r.coeffs) == 1:
            rinv = TPolyMatrix(self.alg_b,
                               [self.alg_b.inv_matrix(self.r.coeffs[0])])
        else:
            raise NotInvertible("path inverses are rational in t; invert at nodes")
        return ExtensionElement(wp_inv, wm_inv, rinv, self.d, self.cutoff)


class PrincipalSymbol:
    """(w_plus, w_minus, f): the order-(0,0) principal symbol triple.

    f is polynomial in t; each coefficient maps (sphere mode, torus modes)
    to a q x q scalar matrix.  Endpoints follow the path convention:
    f(0) matches the minus end, f(1) the plus end.
    """

    def __init__(self, wp, wm, f_t=None, d: int = 3, cutoff: int = 12):
        self.wp = wp
        self.wm = wm
        self.d = d
        self.cutoff = cutoff
        self.q = len(wp)
        if f_t is None:
            f0 = leading_matrix_modes(iota_lam_matrix(wm))
            f1 = leading_matrix_modes(lam_matrix(wp))
            self.f_t = [f0, _mode_sub(f1, f0)]
        else:
            self.f_t = f_t
        self._check_f()

    def _check_f(self):
        f0 = _modes_at(self.f_t, 0)
        f1 = _modes_at(self.f_t, 1)
        lead0 = leading_matrix_modes(iota_lam_matrix(self.wm))
        lead1 = leading_matrix_modes(lam_matrix(self.wp))
        if not _modes_eq(f0, lead0) or not _modes_eq(f1, lead1):
            raise ValueError("f endpoints must match the leading series terms")

    def block_diag(self, other: "PrincipalSymbol") -> "PrincipalSymbol":
        alg_p = symbol_algebra(self.d, self.cutoff, op=False)
        alg_m = symbol_algebra(self.d, self.cutoff, op=True)
        q1, q2 = self.q, other.q
        q = q1 + q2

        def embed(mat1, mat2, alg):
            z = alg.zero()
            out = [[z for _ in range(q)] for _ in range(q)]
            for i in range(q1):
                for j in range(q1):
                    out[i][j] = mat1[i][j]
            for i in range(q2):
                for j in range(q2):
                    out[q1 + i][q1 + j] = mat2[i][j]
            return out

        return PrincipalSymbol(embed(self.wp, other.wp, alg_p),
                               embed(self.wm, other.wm, alg_m),
                               d=self.d, cutoff=self.cutoff)


def leading_angle_modes(sym: FormalSymbol):
    """Sphere-angle Fourier modes of the degree-0 part (rho-power paths)."""
    h = sym.comps.get(0)
    out: dict[int, QI] = {}
    if h is None:
        return out
    if h.den_rho_power is None:
        raise NotImplementedError("leading-term extraction needs rho-power denominators")
    # on the circle: x = (u + u^-1)/2, xi = (u - u^-1)/(2i)
    for (ex, exi), c in h.num.terms.items():
        base = {0: c}
        for _ in range(ex):
            base = _mode_mul(base, {1: QI(Fraction(1, 2)), -1: QI(Fraction(1, 2))})
        for _ in range(exi):
            base = _mode_mul(base, {1: QI(0, Fraction(-1, 2)), -1: QI(0, Fraction(1, 2))})
        for m, v in base.items():
            cur = out.get(m, QI(0)) + v
            if cur.is_zero():
                out.pop(m, None)
            else:
                out[m] = cur
    return out


def _mode_mul(a, b):
    out = {}
    for m1, v1 in a.items():
        for m2, v2 in b.items():
            m = m1 + m2
            cur = out.get(m, QI(0)) + v1 * v2
            if cur.is_zero():
                out.pop(m, None)
            else:
                out[m] = cur
    return out


def leading_matrix_modes(mat):
    """{(sphere mode, torus modes): q x q QI matrix} of leading terms."""
    q = len(mat)
    out: dict[tuple, list] = {}
    for i in range(q):
        for j in range(q):
            sec = mat[i][j]
            for K, sym in sec.waves.items():
                for m, v in leading_angle_modes(sym).items():
                    key = (m, K)
                    if key not in out:
                        out[key] = [[QI(0)] * q for _ in range(q)]
                    out[key][i][j] = out[key][i][j] + v
    return {k: v for k, v in out.items()
            if any(not c.is_zero() for row in v for c in row)}


def _mode_sub(a, b):
    out = {k: [row[:] for row in v] for k, v in a.items()}
    for k, v in b.items():
        if k not in out:
            out[k] = [[QI(0) - c for c in row] for row in v]
        else:
            out[k] = [[x - y for x, y in zip(r1, r2)]
                      for r1, r2 in zip(out[k], v)]
    return {k: v for k, v in out.items()
            if any(not c.is_zero() for row in v for c in row)}


def _modes_at(f_t, t):
    acc: dict = {}
    power = QI(1)
    for coeff in f_t:
        for k, v in coeff.items():
            cur = acc.get(k)
            scaled = [[c * power for c in row] for row in v]
            if cur is None:
                acc[k] = scaled
            else:
                acc[k] = [[x + y for x, y in zip(r1, r2)]
                          for r1, r2 in zip(cur, scaled)]
        power = power * QI(t)
    return {k: v for k, v in acc.items()
            if any(not c.is_zero() for row in v for c in row)}


def _modes_eq(a, b):
    keys = set(a) | set(b)
    for k in keys:
        va = a.get(k)
        vb = b.get(k)
        if va is None or vb is None:
            probe = va if va is not None else vb
            if any(not c.is_zero() for row in probe for c in row):
                return False
            continue
        if any(x != y for r1, r2 in zip(va, vb) for x, y in zip(r1, r2)):
            return False
    return True


def section_s(sym: PrincipalSymbol) -> ExtensionElement:
    """Canonical section: the straight path through the series quotient.

    r(t) = r0 + t r1 with r0 the twisted minus series and r1 the gap to the
    plus series; endpoint compatibilities hold by construction.
    """
    alg_b = symbol_algebra(sym.d, sym.cutoff, op=False)
    r0 = iota_lam_matrix(sym.wm)
    r1 = mat_add(alg_b, lam_matrix(sym.wp), r0, sign=-1)
    r = TPolyMatrix(alg_b, [r0, r1])
    return ExtensionElement(sym.wp, sym.wm, r, sym.d, sym.cutoff)
