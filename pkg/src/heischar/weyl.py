"""Polyhomogeneous Weyl symbols and the formal star product.

Symbols live on R^{2n} with coordinates (x_1..x_n, xi_1..xi_n).  A
FormalSymbol is a finite family of homogeneous rational components indexed
by integer degree, truncated below at -cutoff.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct

from .homog import HomogRat, NotHomogeneous, DenominatorVanishes, log_rho2_derivative
from .poly import Poly, rho2
from .scalars import QI

DEFAULT_CUTOFF = 12  # components kept down to degree -DEFAULT_CUTOFF


class NotInvertible(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


class NotInSp(ValueError):
    pass


# --------------------------------------------------------------------------
# multi-index machinery for the bidifferential operators
# --------------------------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _index_pairs(k: int, n: int):
    """All (alpha, beta) with alpha, beta in N^n and |alpha|+|beta| = k."""
    for ka in range(k + 1):
        for alpha in _compositions(ka, n):
            for beta in _compositions(k - ka, n):
                yield alpha, beta


def _fact_multi(m) -> int:
    out = 1
    for v in m:
        for i in range(2, v + 1):
            out *= i
    return out


class _DerivTable:
    """Memoized iterated partial derivatives of one HomogRat."""

    def __init__(self, h: HomogRat):
        self.cache = {(0,) * h.nvars: h}

    def get(self, exps) -> HomogRat:
        exps = tuple(exps)
        hit = self.cache.get(exps)
        if hit is not None:
            return hit
        i = next(j for j, v in enumerate(exps) if v)
        prev = list(exps)
        prev[i] -= 1
        h = self.get(tuple(prev)).partial(i)
        self.cache[exps] = h
        return h


def _table_of(h: HomogRat) -> _DerivTable:
    """Derivative table attached to the component, shared across products."""
    if h._dcache is None:
        h._dcache = _DerivTable(h)
    return h._dcache


def bk_bidiff(f: HomogRat, g: HomogRat, k: int,
              tf: _DerivTable = None, tg: _DerivTable = None) -> HomogRat:
    """k-th bidifferential term of the star product:

    (i/2)^k sum_{|a|+|b|=k} (-1)^|b|/(a! b!) (d_x^a d_xi^b f)(d_x^b d_xi^a g)
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    nv = f.nvars
    n = nv // 2
    if k == 0:
        return f * g
    tf = tf or _table_of(f)
    tg = tg or _table_of(g)
    acc = HomogRat.zero(nv)
    for alpha, beta in _index_pairs(k, n):
        df = tf.get(alpha + beta)
        if df.is_zero():
            continue
        dg = tg.get(beta + alpha)
        if dg.is_zero():
            continue
        c = Fraction((-1) ** sum(beta), _fact_multi(alpha) * _fact_multi(beta))
        term = (df * dg).scale(c)
        acc = term if acc.is_zero() else acc + term
    if acc.is_zero():
        return acc
    ihalf = QI(0, Fraction(1, 2))
    scale = QI(1)
    for _ in range(k):
        scale = scale * ihalf
    return acc.scale(scale)


def _bk_log(f: HomogRat, k: int, tf: _DerivTable) -> HomogRat:
    """B_k(f, log rho^2); valid for k >= 1 where every g-derivative exists."""
    assert k >= 1
    nv = f.nvars
    n = nv // 2
    acc = HomogRat.zero(nv)
    for alpha, beta in _index_pairs(k, n):
        df = tf.get(alpha + beta)
        if df.is_zero():
            continue
        dg = log_rho2_derivative(nv, beta + alpha)
        if dg.is_zero():
            continue
        c = Fraction((-1) ** sum(beta), _fact_multi(alpha) * _fact_multi(beta))
        term = (df * dg).scale(c)
        acc = term if acc.is_zero() else acc + term
    if acc.is_zero():
        return acc
    ihalf = QI(0, Fraction(1, 2))
    scale = QI(1)
    for _ in range(k):
        scale = scale * ihalf
    return acc.scale(scale)


# --------------------------------------------------------------------------
# FormalSymbol
# --------------------------------------------------------------------------

class FormalSymbol:
    """Truncated polyhomogeneous series: {degree d -> HomogRat of degree d}.

    `cutoff` C means components are trusted for degrees >= -C; None marks an
    entire series (all omitted components are exactly zero, e.g. polynomials).
    `model` optionally carries an exact spectral (Hermite-basis) realisation
    used by the regularized trace; it propagates through exact operations.
    """

    __slots__ = ("n", "comps", "cutoff", "model")

    def __init__(self, n: int, comps=None, cutoff=DEFAULT_CUTOFF, model=None):
        self.n = n
        self.comps = {}
        if comps:
            for d, h in comps.items():
                if h.is_zero():
                    continue
                hd = h.num.is_homogeneous() - h.den.is_homogeneous()
                if hd != d:
                    raise NotHomogeneous(f"component keyed {d} has degree {hd}")
                if cutoff is not None and d < -cutoff:
                    continue
                self.comps[d] = h
        self.cutoff = cutoff
        self.model = model

    # ------------------------------------------------------------ builders
    @staticmethod
    def zero(n: int, cutoff=None) -> "FormalSymbol":
        model = None
        if n == 1:
            from .spectral import SpectralModel
            model = SpectralModel.zero()
        return FormalSymbol(n, {}, cutoff, model)

    @staticmethod
    def unit(n: int, cutoff=None) -> "FormalSymbol":
        return FormalSymbol.from_poly(Poly.constant(2 * n, 1), cutoff)

    @staticmethod
    def from_poly(p: Poly, cutoff=None) -> "FormalSymbol":
        """Split a polynomial on R^{2n} into homogeneous components.

        One-dimensional even polynomials automatically receive an exact
        Hermite band model, which keeps the regularized trace exact along
        every star-product pipeline they enter.
        """
        n2 = p.nvars
        buckets: dict[int, dict] = {}
        for e, c in p.terms.items():
            buckets.setdefault(sum(e), {})[e] = c
        comps = {d: HomogRat(Poly(n2, t)) for d, t in buckets.items()}
        sym = FormalSymbol(n2 // 2, comps, cutoff)
        if n2 == 2 and all(d % 2 == 0 for d in comps):
            from .oscillator import weyl_normal_ordered
            from .spectral import SpectralModel
            sym.model = SpectralModel.from_normal_ordered(weyl_normal_ordered(p))
        return sym

    @staticmethod
    def from_component(h: HomogRat, cutoff=DEFAULT_CUTOFF) -> "FormalSymbol":
        return FormalSymbol(h.nvars // 2, {h.deg: h}, cutoff)

    # ------------------------------------------------------------ queries
    def is_zero(self) -> bool:
        return not self.comps

    def top_degree(self):
        return max(self.comps) if self.comps else None

    def bottom_degree(self):
        return min(self.comps) if self.comps else None

    def is_polynomial(self) -> bool:
        return all(h.is_poly() for h in self.comps.values())

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.comps)

    def component(self, d: int) -> HomogRat:
        return self.comps.get(d, HomogRat.zero(2 * self.n))

    def scalar_part(self) -> QI:
        """Coefficient of the unit: the constant part of the degree-0 term."""
        h = self.comps.get(0)
        if h is None:
            return QI(0)
        if h.is_poly() and h.num.degree() <= 0:
            return h.num.constant_term()
        from .sphere import sphere_average
        return sphere_average(h)

    def is_scalar_multiple_of_unit(self) -> bool:
        if not self.comps:
            return True
        if set(self.comps) != {0}:
            return False
        h = self.comps[0]
        c = self.scalar_part()
        one = HomogRat(Poly.constant(2 * self.n, 1))
        return h == one.scale(c)

    def norm_hint(self) -> float:
        return sum(h.norm_hint() for h in self.comps.values())

    # ------------------------------------------------------------ algebra
    def _merge_cut(self, other):
        if self.cutoff is None:
            return other.cutoff
        if other.cutoff is None:
            return self.cutoff
        return min(self.cutoff, other.cutoff)

    def __add__(self, other: "FormalSymbol") -> "FormalSymbol":
        cut = self._merge_cut(other)
        out: dict[int, HomogRat] = dict(self.comps)
        for d, h in other.comps.items():
            if d in out:
                s = out[d] + h
                if s.is_zero():
                    del out[d]
                else:
                    out[d] = s
            else:
                out[d] = h
        model = None
        if self.model is not None and other.model is not None:
            model = self.model.add(other.model)
        return FormalSymbol(self.n, out, cut, model)

    def __neg__(self):
        model = self.model.scale(QI(-1)) if self.model is not None else None
        return FormalSymbol(self.n, {d: -h for d, h in self.comps.items()},
                            self.cutoff, model)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FormalSymbol":
        c = QI.of(c)
        if c.is_zero():
            return FormalSymbol(self.n, {}, self.cutoff,
                                self.model.scale(c) if self.model is not None else None)
        model = self.model.scale(c) if self.model is not None else None
        return FormalSymbol(self.n, {d: h.scale(c) for d, h in self.comps.items()},
                            self.cutoff, model)

    def truncate(self, cutoff: int) -> "FormalSymbol":
        return FormalSymbol(self.n, {d: h for d, h in self.comps.items()
                                     if d >= -cutoff}, cutoff, self.model)

    def drop_model(self) -> "FormalSymbol":
        return FormalSymbol(self.n, dict(self.comps), self.cutoff, None)

    def conj(self) -> "FormalSymbol":
        return FormalSymbol(self.n, {d: h.conj() for d, h in self.comps.items()},
                            self.cutoff, None)

    def __eq__(self, other):
        """Exact agreement of all components above the coarser cutoff."""
        if not isinstance(other, FormalSymbol):
            return NotImplemented
        if self.n != other.n:
            return False
        cut = self._merge_cut(other)
        degs = set(self.comps) | set(other.comps)
        if cut is not None:
            degs = {d for d in degs if d >= -cut}
        return all(self.component(d) == other.component(d) for d in degs)

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.comps))))

    def __repr__(self):
        if not self.comps:
            return "FormalSymbol(0)"
        bits = [f"[{d}] {h}" for d, h in sorted(self.comps.items(), reverse=True)]
        return "FormalSymbol(" + "; ".join(bits) + ")"


def star(a: FormalSymbol, b: FormalSymbol, degrees=None) -> FormalSymbol:
    """Formal star product; exact for every retained degree.

    `degrees` restricts the computed output components (the values are the
    same ones the full product would carry there).
    """
    if a.n != b.n:
        raise ValueError("mixed dimensions")
    n2 = 2 * a.n
    if a.is_zero() or b.is_zero():
        cut = a._merge_cut(b)
        model = None
        if a.model is not None and b.model is not None:
            model = a.model.mul(b.model)
        return FormalSymbol(a.n, {}, cut, model)
    # trust analysis: unknown parts of `a` live below -cutoff_a and couple to
    # the top of `b`, so the product is trusted above max(-Na+db, -Nb+da)
    if a.cutoff is None:
        n_out = None if b.cutoff is None else b.cutoff - a.top_degree()
    elif b.cutoff is None:
        n_out = a.cutoff - b.top_degree()
    else:
        n_out = min(a.cutoff - b.top_degree(), b.cutoff - a.top_degree())
    out: dict[int, HomogRat] = {}
    tables_a = {d: _table_of(h) for d, h in a.comps.items()}
    tables_b = {d: _table_of(h) for d, h in b.comps.items()}
    for da, ha in a.comps.items():
        for db, hb in b.comps.items():
            kmax = None
            if n_out is not None:
                kmax = (da + db + n_out) // 2
            if ha.is_poly():
                kp = ha.num.degree()
                kmax = kp if kmax is None else min(kmax, kp)
            if hb.is_poly():
                kp = hb.num.degree()
                kmax = kp if kmax is None else min(kmax, kp)
            if kmax is None:
                raise ValueError("star of two non-polynomial series needs a finite cutoff")
            for k in range(kmax + 1):
                d_out = da + db - 2 * k
                if n_out is not None and d_out < -n_out:
                    break
                if degrees is not None and d_out not in degrees:
                    continue
                term = bk_bidiff(ha, hb, k, tables_a[da], tables_b[db])
                if term.is_zero():
                    continue
                if d_out in out:
                    s = out[d_out] + term
                    if s.is_zero():
                        del out[d_out]
                    else:
                        out[d_out] = s
                else:
                    out[d_out] = term
    model = None
    if a.model is not None and b.model is not None:
        model = a.model.mul(b.model)
    return FormalSymbol(a.n, out, n_out, model)


def star_many(*symbols: FormalSymbol) -> FormalSymbol:
    out = symbols[0]
    for s in symbols[1:]:
        out = star(out, s)
    return out


def commutator(a: FormalSymbol, b: FormalSymbol) -> FormalSymbol:
    return star(a, b) - star(b, a)


def iota(a: FormalSymbol) -> FormalSymbol:
    """Sign flip (-1)^j on the degree -2j component; an anti-automorphism."""
    if not a.is_even():
        raise NotHomogeneous("involution is defined on even symbols only")
    out = {}
    for d, h in a.comps.items():
        out[d] = h if (d // 2) % 2 == 0 else -h
    return FormalSymbol(a.n, out, a.cutoff, None)


def delta(a: FormalSymbol) -> FormalSymbol:
    """Derivation a -> a*log(rho^2) - log(rho^2)*a, computed termwise.

    Only odd bidifferential orders survive in the commutator, and every
    log-derivative of order >= 1 is homogeneous rational, so the result
    stays inside the symbol class.  Degrees drop by 2k at order k.
    """
    if not a.is_even():
        raise NotHomogeneous("log-derivation is defined on even symbols only")
    n_out = None if a.cutoff is None else a.cutoff + 2
    out: dict[int, HomogRat] = {}
    for d, h in a.comps.items():
        table = _table_of(h)
        kmax = None
        if n_out is not None:
            kmax = (d + n_out) // 2
        if h.is_poly():
            kp = h.num.degree()
            kmax = kp if kmax is None else min(kmax, kp)
        if kmax is None:
            raise ValueError("log-derivation of a non-polynomial series needs a cutoff")
        for k in range(1, kmax + 1, 2):
            term = _bk_log(h, k, table)
            if term.is_zero():
                continue
            term = term.scale(2)
            d_out = d - 2 * k
            if d_out in out:
                s = out[d_out] + term
                if s.is_zero():
                    del out[d_out]
                else:
                    out[d_out] = s
            else:
                out[d_out] = term
    return FormalSymbol(a.n, out, n_out, None)


def invert_formal(a: FormalSymbol, cutoff=None) -> FormalSymbol:
    """Star inverse, solved order by order from the leading component."""
    if a.is_zero():
        raise NotInvertible("zero symbol")
    cut = cutoff if cutoff is not None else (a.cutoff if a.cutoff is not None
                                             else DEFAULT_CUTOFF)
    top = a.top_degree()
    try:
        lead_inv = a.comps[top].reciprocal()
    except (DenominatorVanishes, ZeroDivisionError) as exc:
        raise NotInvertible(f"leading component not invertible on the sphere: {exc}")
    n2 = 2 * a.n
    b_comps: dict[int, HomogRat] = {-top: lead_inv}
    # level t: output degree -t relative to the unit; solve for b at degree
    # -top - t using all lower-order data
    a_tables = {d: _table_of(h) for d, h in a.comps.items()}
    t = 1
    while -top - t >= -cut:
        acc = HomogRat.zero(n2)
        target = -t  # product component degree
        for da, ha in a.comps.items():
            for db, hb in list(b_comps.items()):
                if db == -top - t:
                    continue
                rem = da + db - target
                if rem < 0 or rem % 2:
                    continue
                k = rem // 2
                if ha.is_poly() and k > ha.num.degree():
                    continue
                term = bk_bidiff(ha, hb, k, a_tables[da], None)
                if not term.is_zero():
                    acc = term if acc.is_zero() else acc + term
        if not acc.is_zero():
            nxt = (lead_inv * acc).scale(-1)
            if not nxt.is_zero():
                b_comps[-top - t] = nxt
        t += 1
    model = None
    if a.model is not None:
        model = a.model.try_invert()
    return FormalSymbol(a.n, b_comps, cut, model)


# --------------------------------------------------------------------------
# symplectic action and the quadratic Lie algebra
# --------------------------------------------------------------------------

def std_j(n: int):
    """Matrix of the symplectic form: omega(v, w) = v^T J w."""
    d = 2 * n
    J = [[Fraction(0)] * d for _ in range(d)]
    for i in range(n):
        J[i][n + i] = Fraction(1)
        J[n + i][i] = Fraction(-1)
    return J


def _mat_mul(A, B):
    m, k, n = len(A), len(B), len(B[0])
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(n)]
            for i in range(m)]


def _mat_inv(A):
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise NotInvertible("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def _check_symplectic(g, n: int):
    J = std_j(n)
    gt = [list(col) for col in zip(*g)]
    lhs = _mat_mul(_mat_mul(gt, J), g)
    for i in range(2 * n):
        for j in range(2 * n):
            if lhs[i][j] != J[i][j]:
                raise NotSymplectic(f"g^T J g != J at ({i},{j})")


def act_symplectic(g, a: FormalSymbol) -> FormalSymbol:
    """Pullback a -> a o g^{-1}; an automorphism of the star product."""
    n = a.n
    g = [[_to_fraction(v) for v in row] for row in g]
    _check_symplectic(g, n)
    ginv = _mat_inv(g)
    out = {d: h.compose_linear(ginv) for d, h in a.comps.items()}
    return FormalSymbol(n, out, a.cutoff, None)


def _to_fraction(v) -> Fraction:
    if isinstance(v, float):
        fr = Fraction(v).limit_denominator(10**12)
        if abs(float(fr) - v) > 1e-9:
            raise NotSymplectic("matrix entry not rational enough")
        return fr
    return Fraction(v)


class QuadraticElement:
    """Purely imaginary quadratic iQ with Q a real quadratic polynomial."""

    __slots__ = ("Q",)

    def __init__(self, Q: Poly):
        if not Q.is_zero():
            if Q.is_homogeneous() != 2:
                raise NotHomogeneous("generator must be homogeneous quadratic")
            if any(not c.is_real() for c in Q.terms.values()):
                raise ValueError("generator polynomial must be real")
        self.Q = Q

    def as_symbol(self, cutoff=None) -> FormalSymbol:
        iq = self.Q.scale(QI(0, 1))
        return FormalSymbol.from_poly(iq, cutoff)

    def hessian(self):
        n2 = self.Q.nvars
        return [[self.Q.partial(i).partial(j).constant_term().re
                 for j in range(n2)] for i in range(n2)]

    def __eq__(self, other):
        return isinstance(other, QuadraticElement) and self.Q == other.Q

    def __repr__(self):
        return f"i*({self.Q})"


def mu(X: QuadraticElement):
    """The linear symplectic generator matched to iQ via the form pairing."""
    S = X.hessian()
    n2 = len(S)
    J = std_j(n2 // 2)
    negJ = [[-v for v in row] for row in J]
    return _mat_mul(negJ, S)


def mu_inv(A) -> QuadraticElement:
    """Inverse of mu; requires A^T J + J A = 0."""
    n2 = len(A)
    A = [[Fraction(v) if not isinstance(v, float) else _to_fraction(v) for v in row]
         for row in A]
    J = std_j(n2 // 2)
    At = [list(col) for col in zip(*A)]
    chk = _mat_mul(At, J)
    JA = _mat_mul(J, A)
    for i in range(n2):
        for j in range(n2):
            if chk[i][j] + JA[i][j] != 0:
                raise NotInSp("matrix is not in the symplectic Lie algebra")
    terms = {}
    for i in range(n2):
        for j in range(n2):
            if JA[i][j] == 0:
                continue
            e = [0] * n2
            e[i] += 1
            e[j] += 1
            key = tuple(e)
            terms[key] = terms.get(key, Fraction(0)) + Fraction(1, 2) * JA[i][j]
    Q = Poly(n2, {e: QI(c) for e, c in terms.items() if c != 0})
    return QuadraticElement(Q)


# --------------------------------------------------------------------------
# matrices of symbols
# --------------------------------------------------------------------------

class MatrixSymbol:
    """Square matrix with FormalSymbol entries under the star product."""

    __slots__ = ("q", "n", "entries")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.q = len(self.entries)
        self.n = self.entries[0][0].n
        for row in self.entries:
            assert len(row) == self.q
            for e in row:
                assert e.n == self.n

    @staticmethod
    def identity(q: int, n: int, cutoff=None) -> "MatrixSymbol":
        return MatrixSymbol([[FormalSymbol.unit(n, cutoff) if i == j
                              else FormalSymbol.zero(n, cutoff)
                              for j in range(q)] for i in range(q)])

    @staticmethod
    def scalar(sym: FormalSymbol) -> "MatrixSymbol":
        return MatrixSymbol([[sym]])

    @staticmethod
    def block_diag(*blocks: "MatrixSymbol") -> "MatrixSymbol":
        n = blocks[0].n
        q = sum(b.q for b in blocks)
        out = [[FormalSymbol.zero(n) for _ in range(q)] for _ in range(q)]
        off = 0
        for b in blocks:
            for i in range(b.q):
                for j in range(b.q):
                    out[off + i][off + j] = b.entries[i][j]
            off += b.q
        return MatrixSymbol(out)

    def cutoff(self):
        cuts = [e.cutoff for row in self.entries for e in row if e.cutoff is not None]
        return min(cuts) if cuts else None

    def __add__(self, other):
        return MatrixSymbol([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return MatrixSymbol([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return MatrixSymbol([[-a for a in row] for row in self.entries])

    def scale(self, c):
        return MatrixSymbol([[a.scale(c) for a in row] for row in self.entries])

    def star(self, other: "MatrixSymbol", reverse: bool = False) -> "MatrixSymbol":
        q = self.q
        out = []
        for i in range(q):
            row = []
            for j in range(q):
                acc = FormalSymbol.zero(self.n, self.cutoff())
                for t in range(q):
                    if reverse:
                        acc = acc + star(other.entries[t][j], self.entries[i][t])
                    else:
                        acc = acc + star(self.entries[i][t], other.entries[t][j])
                row.append(acc)
            out.append(row)
        return MatrixSymbol(out)

    def trace(self) -> FormalSymbol:
        acc = self.entries[0][0]
        for i in range(1, self.q):
            acc = acc + self.entries[i][i]
        return acc

    def map(self, fn) -> "MatrixSymbol":
        return MatrixSymbol([[fn(e) for e in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, MatrixSymbol):
            return NotImplemented
        return self.q == other.q and all(
            a == b for r1, r2 in zip(self.entries, other.entries)
            for a, b in zip(r1, r2))

    def norm_hint(self) -> float:
        return sum(e.norm_hint() for row in self.entries for e in row)

    def star_invert(self, cutoff=None) -> "MatrixSymbol":
        """Star inverse: diagonal-plus-nilpotent shortcut when available,
        otherwise order-by-order from the pointwise leading matrix."""
        q, n2 = self.q, 2 * self.n
        cut = cutoff if cutoff is not None else (self.cutoff() or DEFAULT_CUTOFF)
        if q == 1:
            return MatrixSymbol([[invert_formal(self.entries[0][0], cut)]])
        ident = MatrixSymbol.identity(q, self.n, cut)
        try:
            dinv = MatrixSymbol([[invert_formal(self.entries[i][j], cut)
                                  if i == j else FormalSymbol.zero(self.n, cut)
                                  for j in range(q)] for i in range(q)])
            rest = MatrixSymbol([[FormalSymbol.zero(self.n, cut) if i == j
                                  else self.entries[i][j] for j in range(q)]
                                 for i in range(q)])
            corr = dinv.star(rest)
            out = dinv
            power = dinv
            for _ in range(q):
                power = corr.star(power).scale(-1)
                if power.is_zero():
                    if self.star(out) == ident and out.star(self) == ident:
                        return out
                    break
                out = out + power
        except NotInvertible:
            pass
        tops = [e.top_degree() for row in self.entries for e in row
                if e.top_degree() is not None]
        if not tops:
            raise NotInvertible("zero matrix")
        top = max(tops)
        lead = [[self.entries[i][j].component(top) for j in range(q)]
                for i in range(q)]
        lead_inv = _hr_matrix_inv(lead, n2)
        binv = [[FormalSymbol.from_component(h, cut) if not h.is_zero()
                 else FormalSymbol.zero(self.n, cut) for h in row]
                for row in lead_inv]
        B = MatrixSymbol(binv)
        # Newton-like correction: B <- B + B(1 - A B), doubling the order
        for _ in range(max(1, cut + abs(top) + 2)):
            err = ident - self.star(B)
            if err.is_zero():
                break
            B = B + B.star(err)
        return B

    def __repr__(self):
        return f"MatrixSymbol(q={self.q})"


def _hr_matrix_inv(M, nvars: int):
    """Pointwise inverse of a matrix of same-degree HomogRat entries."""
    q = len(M)
    if q == 1:
        return [[M[0][0].reciprocal()]]
    from itertools import permutations

    def minor_det(rows, cols):
        sub = [[M[r][c] for c in cols] for r in rows]
        k = len(sub)
        acc = None
        for perm in permutations(range(k)):
            sgn = 1
            seen = list(perm)
            for i in range(k):
                for j in range(i + 1, k):
                    if seen[i] > seen[j]:
                        sgn = -sgn
            term = sub[0][perm[0]]
            for r in range(1, k):
                term = term * sub[r][perm[r]]
            term = term.scale(sgn)
            acc = term if acc is None else acc + term
        return acc

    det = minor_det(range(q), range(q))
    try:
        det_inv = det.reciprocal()
    except (DenominatorVanishes, ZeroDivisionError) as exc:
        raise NotInvertible(f"leading matrix not invertible on the sphere: {exc}")
    out = [[None] * q for _ in range(q)]
    for i in range(q):
        for j in range(q):
            rows = [r for r in range(q) if r != j]
            cols = [c for c in range(q) if c != i]
            cof = minor_det(rows, cols)
            out[i][j] = (cof * det_inv).scale((-1) ** (i + j))
    return out
