"""Torus sections: finite Fourier sums with values in a fiber algebra.

A section is {frequency vector K: fiber value}; products convolve
frequencies and multiply fibers, derivatives multiply by i K_j.  Fiber
adapters make the same machinery serve plain functions, Weyl symbols,
matrices of symbols, and their opposite algebras.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import QI
from .weyl import FormalSymbol, MatrixSymbol, star


class ComplexFiber:
    """QI scalars."""

    def __init__(self):
        self.kind = "scalar"

    def unit(self):
        return QI(1)

    def zero(self):
        return QI(0)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a * QI.of(c)

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def norm(self, a):
        return abs(complex(a))

    def conj(self, a):
        return a.conj()

    def scalar_part(self, a):
        return a

    def functional(self, seed, kill_unit):
        if kill_unit:
            return lambda a: QI(0)
        w = QI(Fraction(1 + (seed * 13) % 7, 1 + (seed * 5) % 5))
        return lambda a: a * w


def _eval_points(seed: int):
    num = 1 + (seed * 29) % 7
    den = 2 + (seed * 17) % 5
    return (Fraction(num, den), Fraction(2 + (seed * 11) % 5, 3))


class SymbolFiber:
    """FormalSymbol fibers; `op` reverses the star product."""

    def __init__(self, n: int = 1, cutoff: int = 12, op: bool = False):
        self.n = n
        self.cutoff_default = cutoff
        self.op = op
        self.kind = "symbol-op" if op else "symbol"

    def unit(self):
        return FormalSymbol.unit(self.n)

    def zero(self):
        return FormalSymbol.zero(self.n)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return star(b, a) if self.op else star(a, b)

    def scale(self, a, c):
        return a.scale(c)

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def norm(self, a):
        return a.norm_hint()

    def scalar_part(self, a):
        return a.scalar_part()

    def functional(self, seed, kill_unit):
        pt = _eval_points(seed)
        weights = {}

        def f(a):
            acc = QI(0)
            for d, h in a.comps.items():
                if d not in weights:
                    weights[d] = QI(Fraction(1 + (seed * 19 + d * 7) % 11,
                                             1 + (seed + abs(d)) % 6))
                num = _qi_eval(h.num, pt)
                den = _qi_eval(h.den, pt)
                acc = acc + weights[d] * num / den
            if kill_unit:
                s = a.scalar_part()
                if not s.is_zero():
                    if 0 not in weights:
                        weights[0] = QI(Fraction(1 + (seed * 19) % 11,
                                                 1 + seed % 6))
                    acc = acc - weights[0] * s
            return acc
        return f


def _qi_eval(p, pt) -> QI:
    acc = QI(0)
    for e, c in p.terms.items():
        v = c
        for x, k in zip(pt, e):
            for _ in range(k):
                v = v * QI(x)
        acc = acc + v
    return acc


class MatrixSymbolFiber:
    """q x q matrices of symbols; `op` reverses both levels at once."""

    def __init__(self, q: int, n: int = 1, cutoff: int = 12, op: bool = False):
        self.q = q
        self.n = n
        self.cutoff_default = cutoff
        self.op = op
        self.kind = f"matsym{q}" + ("-op" if op else "")

    def unit(self):
        return MatrixSymbol.identity(self.q, self.n)

    def zero(self):
        return MatrixSymbol([[FormalSymbol.zero(self.n) for _ in range(self.q)]
                             for _ in range(self.q)])

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a.star(b, reverse=True) if self.op else a.star(b)

    def scale(self, a, c):
        return a.scale(c)

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def norm(self, a):
        return a.norm_hint()

    def scalar_part(self, a):
        tr = a.trace().scalar_part()
        return tr * QI(Fraction(1, self.q))

    def functional(self, seed, kill_unit):
        base = SymbolFiber(self.n, self.cutoff_default)
        fs = [[base.functional(seed * 37 + 11 * i + 3 * j, False)
               for j in range(self.q)] for i in range(self.q)]

        def f(a):
            acc = QI(0)
            for i in range(self.q):
                for j in range(self.q):
                    acc = acc + fs[i][j](a.entries[i][j])
            if kill_unit:
                s = self.scalar_part(a)
                if not s.is_zero():
                    u = QI(0)
                    for i in range(self.q):
                        u = u + fs[i][i](FormalSymbol.unit(self.n))
                    acc = acc - s * u
            return acc
        return f


class Section:
    """Finite Fourier sum over the torus with fiber values."""

    __slots__ = ("d", "fib", "waves")

    def __init__(self, d: int, fib, waves=None):
        self.d = d
        self.fib = fib
        self.waves = {}
        for K, v in (waves or {}).items():
            if not fib.is_zero(v):
                self.waves[tuple(K)] = v

    @staticmethod
    def constant(d: int, fib, v) -> "Section":
        return Section(d, fib, {(0,) * d: v})

    @staticmethod
    def unit(d: int, fib) -> "Section":
        return Section.constant(d, fib, fib.unit())

    def is_zero(self):
        return not self.waves

    def __add__(self, other):
        out = dict(self.waves)
        for K, v in other.waves.items():
            if K in out:
                s = self.fib.add(out[K], v)
                if self.fib.is_zero(s):
                    del out[K]
                else:
                    out[K] = s
            else:
                out[K] = v
        return Section(self.d, self.fib, out)

    def __neg__(self):
        return Section(self.d, self.fib, {K: self.fib.neg(v)
                                          for K, v in self.waves.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other: "Section") -> "Section":
        out = {}
        for K1, v1 in self.waves.items():
            for K2, v2 in other.waves.items():
                K = tuple(a + b for a, b in zip(K1, K2))
                p = self.fib.mul(v1, v2)
                if K in out:
                    s = self.fib.add(out[K], p)
                    if self.fib.is_zero(s):
                        del out[K]
                        continue
                    out[K] = s
                elif not self.fib.is_zero(p):
                    out[K] = p
        return Section(self.d, self.fib, out)

    def scale(self, c) -> "Section":
        return Section(self.d, self.fib, {K: self.fib.scale(v, c)
                                          for K, v in self.waves.items()})

    def map_fibers(self, fn, fib=None) -> "Section":
        return Section(self.d, fib or self.fib,
                       {K: fn(v) for K, v in self.waves.items()})

    def partial(self, j: int) -> "Section":
        out = {}
        for K, v in self.waves.items():
            if K[j] == 0:
                continue
            out[K] = self.fib.scale(v, QI(0, K[j]))
        return Section(self.d, self.fib, out)

    def zero_mode(self):
        return self.waves.get((0,) * self.d, self.fib.zero())

    def eq(self, other) -> bool:
        return (self - other).is_zero_strict()

    def is_zero_strict(self):
        return all(self.fib.is_zero(v) for v in self.waves.values())

    def norm(self) -> float:
        return sum(self.fib.norm(v) for v in self.waves.values())

    def conj(self) -> "Section":
        out = {}
        for K, v in self.waves.items():
            out[tuple(-k for k in K)] = self.fib.conj(v)
        return Section(self.d, self.fib, out)

    def __repr__(self):
        return f"Section(d={self.d}, modes={sorted(self.waves)})"


class SectionAlgebra:
    """Coefficient-algebra adapter exposing sections to the cyclic machinery."""

    def __init__(self, d: int, fib):
        self.d = d
        self.fib = fib

    def unit(self):
        return Section.unit(self.d, self.fib)

    def zero(self):
        return Section(self.d, self.fib)

    def add(self, x, y):
        return x + y

    def scale(self, x, c):
        return x.scale(c)

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x.mul(y)

    def sub(self, x, y):
        return x - y

    def is_zero(self, x):
        return x.is_zero()

    def eq(self, x, y):
        if set(x.waves) != set(y.waves):
            return False
        return all(self.fib.eq(v, y.waves[K]) for K, v in x.waves.items())

    def scalar_part(self, x):
        return self.fib.scalar_part(x.zero_mode())

    def norm(self, x):
        return x.norm()

    def functional(self, seed, kill_unit):
        base = self.fib.functional(seed, False)
        base0 = self.fib.functional(seed, kill_unit)

        def f(x):
            acc = QI(0)
            for K, v in x.waves.items():
                if all(k == 0 for k in K):
                    acc = acc + base0(v)
                    continue
                w = QI(Fraction(1 + (seed * 23 + sum(abs(k) * (3 + i) for i, k in enumerate(K))) % 13,
                                1 + (seed + sum(abs(k) for k in K)) % 7),
                       Fraction((seed + K[0] if K else 0) % 5, 7))
                acc = acc + w * base(v)
            return acc
        return f

    def inv_matrix(self, mat, verify: bool = True):
        """Exact inverse for the structured shapes the model uses.

        Supported: generalized-permutation matrices of single-mode sections
        (inverted entrywise), optionally perturbed by a nilpotent part
        (finite Neumann series).  The result is verified by multiplication.
        """
        q = len(mat)
        perm = [[None] * q for _ in range(q)]
        support = {}
        for i in range(q):
            nz = [j for j in range(q) if not mat[i][j].is_zero()]
            if len(nz) != 1 or len(mat[i][nz[0]].waves) != 1:
                return self._inv_diag_nilpotent(mat, verify)
            support[i] = nz[0]
        if len(set(support.values())) != q:
            return self._inv_diag_nilpotent(mat, verify)
        out = [[self.zero() for _ in range(q)] for _ in range(q)]
        for i, j in support.items():
            (K, v), = mat[i][j].waves.items()
            inv_v = _fiber_invert(self.fib, v)
            out[j][i] = Section(self.d, self.fib,
                                {tuple(-k for k in K): inv_v})
        if verify:
            self._check_inverse(mat, out)
        return out

    def _inv_diag_nilpotent(self, mat, verify: bool):
        from .cyclic import mat_mul, mat_identity, mat_add
        q = len(mat)
        diag = [[mat[i][j] if i == j else self.zero() for j in range(q)]
                for i in range(q)]
        rest = [[self.zero() if i == j else mat[i][j] for j in range(q)]
                for i in range(q)]
        dinv = [[self.zero() for _ in range(q)] for _ in range(q)]
        for i in range(q):
            s = diag[i][i]
            if len(s.waves) != 1:
                raise NotImplementedError("unsupported section-matrix shape")
            (K, v), = s.waves.items()
            dinv[i][i] = Section(self.d, self.fib,
                                 {tuple(-k for k in K): _fiber_invert(self.fib, v)})
        correction = mat_mul(self, dinv, rest)
        out = dinv
        power = dinv
        for m in range(1, q + 1):
            power = [[self.neg(x) for x in row]
                     for row in mat_mul(self, correction, power)]
            if all(self.is_zero(x) for row in power for x in row):
                break
            out = mat_add(self, out, power)
        else:
            raise NotImplementedError("perturbation is not nilpotent")
        if verify:
            self._check_inverse(mat, out)
        return out

    def _check_inverse(self, mat, inv):
        from .cyclic import mat_mul
        q = len(mat)
        prod = mat_mul(self, mat, inv)
        for i in range(q):
            for j in range(q):
                target = self.unit() if i == j else self.zero()
                if not self.eq(prod[i][j], target):
                    raise ArithmeticError("section-matrix inverse check failed")


def _fiber_invert(fib, v):
    from .weyl import invert_formal
    if isinstance(v, FormalSymbol):
        return invert_formal(v, fib.cutoff_default)
    if isinstance(v, MatrixSymbol):
        return v.star_invert(fib.cutoff_default)
    if isinstance(v, QI):
        return v.inv()
    raise TypeError(f"cannot invert fiber {type(v)}")
