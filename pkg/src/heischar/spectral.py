"""Exact banded operator models on the Hermite basis (one degree of freedom).

A model stores, per even band offset 2m, the rational profile v_m with

    <k+2m | T | k> = v_m(k) * sqrt(w_m(k)),      w_m(k) = (k+2m)!/k!,

plus finitely many exceptional values.  Products, inverses of resolvents,
pseudo-inverses of winding elements, and spectral traces all stay exact in
this class; it is the high-precision backend for the regularized trace.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import mpmath as mp

from .oscillator import KPoly, NormalOrdered
from .scalars import QI
from .zeta_values import GAMMA_LN2_HALF, ZetaModel


# --------------------------------------------------------------------------
# univariate polynomials and rational functions over QI
# --------------------------------------------------------------------------

def _ptrim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else QI(0)) + (b[i] if i < len(b) else QI(0))
                   for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [QI(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pscale(a, c):
    return _ptrim([x * c for x in a])


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError
    a = list(a)
    q = [QI(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and _ptrim(list(a)):
        a = _ptrim(a)
        if len(a) < len(b):
            break
        c = a[-1] / lead
        d = len(a) - len(b)
        q[d] = q[d] + c
        for i, y in enumerate(b):
            a[i + d] = a[i + d] - c * y
        a.pop()
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if a:
        a = _pscale(a, a[-1].inv())
    return a


def _peval(a, k) -> QI:
    acc = QI(0)
    kk = QI(k)
    for c in reversed(a):
        acc = acc * kk + c
    return acc


def _pshift(a, c):
    """p(k + c) expanded."""
    out = [QI(0)] * max(1, len(a))
    binom_row = [QI(1)]
    # build via Horner in (k + c)
    acc: list = []
    for coef in reversed(a):
        acc = _padd(_pmul(acc, [QI(c), QI(1)]), [coef])
    return _ptrim(acc) if acc else []


def _from_counter(cnt: Counter):
    """Polynomial prod (k + c)^mult from a factor Counter."""
    out = [QI(1)]
    for c, mult in cnt.items():
        for _ in range(mult):
            out = _pmul(out, [QI(c), QI(1)])
    return out


class RatFunc:
    """num/den with QI coefficients, den monic, gcd-reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _ptrim([QI.of(c) for c in num])
        den = _ptrim([QI.of(c) for c in (den if den is not None else [1])])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = _pgcd(num, den)
            if len(g) > 1:
                num, _ = _pdivmod(num, g)
                den, _ = _pdivmod(den, g)
        lead = den[-1]
        if not (lead.re == 1 and lead.im == 0):
            inv = lead.inv()
            num = _pscale(num, inv)
            den = _pscale(den, inv)
        self.num = num
        self.den = den

    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc([QI.of(c)])

    @staticmethod
    def linear(a, b) -> "RatFunc":
        """a + b*k."""
        return RatFunc([QI.of(a), QI.of(b)])

    def is_zero(self):
        return not self.num

    def __add__(self, o):
        return RatFunc(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                       _pmul(self.den, o.den))

    def __mul__(self, o):
        return RatFunc(_pmul(self.num, o.num), _pmul(self.den, o.den))

    def scale(self, c):
        return RatFunc(_pscale(self.num, QI.of(c)), self.den)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.den, self.num)

    def shift(self, c) -> "RatFunc":
        return RatFunc(_pshift(self.num, c), _pshift(self.den, c))

    def eval(self, k) -> QI:
        d = _peval(self.den, k)
        if d.is_zero():
            raise ZeroDivisionError(f"pole at {k}")
        return _peval(self.num, k) / d

    def finite_at(self, k) -> bool:
        return not _peval(self.den, k).is_zero()

    def poly_and_proper(self):
        q, r = _pdivmod(self.num, self.den)
        return q, RatFunc(r, self.den)

    def decay_gap(self) -> int:
        if self.is_zero():
            return 10**9
        return (len(self.den) - 1) - (len(self.num) - 1)

    def leading_ratio(self) -> QI:
        return self.num[-1] / self.den[-1]

    def __eq__(self, o):
        return isinstance(o, RatFunc) and self.num == o.num and self.den == o.den

    def __repr__(self):
        return f"RatFunc({self.num}/{self.den})"


class EvRational:
    """Rational profile with finitely many exceptional integer values."""

    __slots__ = ("rf", "exc")

    def __init__(self, rf: RatFunc, exc=None):
        self.rf = rf
        self.exc = {int(k): QI.of(v) for k, v in (exc or {}).items()}

    def value(self, k: int) -> QI:
        if k in self.exc:
            return self.exc[k]
        return self.rf.eval(k)

    def add(self, o: "EvRational") -> "EvRational":
        keys = set(self.exc) | set(o.exc)
        return EvRational(self.rf + o.rf,
                          {k: self.value(k) + o.value(k) for k in keys})

    def scale(self, c) -> "EvRational":
        return EvRational(self.rf.scale(c), {k: v * QI.of(c) for k, v in self.exc.items()})

    def is_zero(self):
        return self.rf.is_zero() and all(v.is_zero() for v in self.exc.values())

    def __repr__(self):
        return f"EvRational({self.rf}, exc={self.exc})"


# --------------------------------------------------------------------------
# band weight bookkeeping
# --------------------------------------------------------------------------

def _w_counter(m: int, shift: int = 0) -> Counter:
    """Factors of w_m(k + shift) as Counter{c: mult} for (k + c)."""
    cnt: Counter = Counter()
    if m >= 0:
        for i in range(1, 2 * m + 1):
            cnt[i + shift] += 1
    else:
        for i in range(0, -2 * m):
            cnt[-i + shift] += 1
    return cnt


def _w_value(m: int, k: int) -> Fraction:
    out = Fraction(1)
    if m >= 0:
        for i in range(1, 2 * m + 1):
            out *= (k + i)
    else:
        for i in range(0, -2 * m):
            out *= (k - i)
    return out


def _weight_bridge(m: int, m2: int) -> RatFunc:
    """Rational r with sqrt(w_m(k+2m2) w_m2(k)) = r(k) sqrt(w_{m+m2}(k))."""
    num = _w_counter(m, 2 * m2) + _w_counter(m2)
    den = _w_counter(m + m2)
    diff = Counter(num)
    for c, mult in den.items():
        diff[c] -= mult
    top: Counter = Counter()
    bot: Counter = Counter()
    for c, mult in diff.items():
        if mult == 0:
            continue
        if mult % 2:
            raise ArithmeticError("band weights do not telescope")
        if mult > 0:
            top[c] = mult // 2
        else:
            bot[c] = -mult // 2
    return RatFunc(_from_counter(top), _from_counter(bot))


def _sqrt_fraction(x: Fraction) -> Fraction:
    n = math.isqrt(x.numerator)
    d = math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise ArithmeticError("band weight ratio is not a perfect square")
    return Fraction(n, d)


_TRH_CACHE: dict = {}


class SpectralModel:
    """Finite family {band offset m: EvRational} of exact band profiles."""

    __slots__ = ("bands",)

    def __init__(self, bands=None):
        self.bands = {}
        for m, ev in (bands or {}).items():
            if not ev.is_zero():
                self.bands[int(m)] = ev

    # ------------------------------------------------------------ builders
    @staticmethod
    def zero() -> "SpectralModel":
        return SpectralModel({})

    @staticmethod
    def identity() -> "SpectralModel":
        return SpectralModel({0: EvRational(RatFunc.const(1))})

    @staticmethod
    def diagonal(rf: RatFunc, exc=None) -> "SpectralModel":
        return SpectralModel({0: EvRational(rf, exc)})

    @staticmethod
    def from_normal_ordered(no: NormalOrdered) -> "SpectralModel":
        bands: dict[int, EvRational] = {}
        for (p, q), c in no.terms.items():
            if (p - q) % 2:
                raise ValueError("odd band offsets are not modeled")
            m = (p - q) // 2
            if m >= 0:
                # adag^p a^q = adag^{2m} ff_q(N)
                prof = RatFunc(_from_counter(Counter({-i: 1 for i in range(q)})))
            else:
                # adag^p a^q = ff_p(N - 2m-ish) applied before lowering:
                # <k+2m| . |k> = ff_p(k + 2m)
                cnt = Counter()
                for i in range(p):
                    cnt[2 * m - i] += 1
                prof = RatFunc(_from_counter(cnt))
            ev = EvRational(prof.scale(c))
            bands[m] = bands[m].add(ev) if m in bands else ev
        return SpectralModel(bands)

    # ------------------------------------------------------------ queries
    def element(self, m: int, k: int) -> complex:
        """Matrix element <k+2m|T|k> (numeric; the sqrt weight is irrational)."""
        if k < 0 or k + 2 * m < 0:
            return 0j
        ev = self.bands.get(m)
        if ev is None:
            return 0j
        w = _w_value(m, k)
        if w == 0:
            return 0j
        return complex(ev.value(k)) * math.sqrt(w)

    def diag(self) -> EvRational:
        return self.bands.get(0, EvRational(RatFunc.const(0)))

    def is_zero(self):
        return not self.bands

    # ------------------------------------------------------------ algebra
    def add(self, o: "SpectralModel") -> "SpectralModel":
        bands = dict(self.bands)
        for m, ev in o.bands.items():
            bands[m] = bands[m].add(ev) if m in bands else ev
        return SpectralModel(bands)

    def scale(self, c) -> "SpectralModel":
        return SpectralModel({m: ev.scale(c) for m, ev in self.bands.items()})

    def mul(self, o: "SpectralModel") -> "SpectralModel":
        out: dict[int, EvRational] = {}
        for m, ev1 in self.bands.items():
            for m2, ev2 in o.bands.items():
                p = m + m2
                bridge = _weight_bridge(m, m2)
                rf = ev1.rf.shift(2 * m2) * ev2.rf * bridge
                guard = 2 * (abs(m) + abs(m2) + abs(p)) + 2
                keys = set(range(guard))
                keys |= set(ev2.exc)
                keys |= {j - 2 * m2 for j in ev1.exc}
                exc = {}
                for k in keys:
                    if k < 0:
                        continue
                    exc[k] = self._pair_element(m, ev1, m2, ev2, k, p)
                term = EvRational(rf, exc)
                out[p] = out[p].add(term) if p in out else term
        return SpectralModel(out)

    @staticmethod
    def _pair_element(m, ev1, m2, ev2, k, p) -> QI:
        """Direct <k+2p|T S|k> / sqrt(w_p(k)) with range guards."""
        mid = k + 2 * m2
        if mid < 0 or k + 2 * p < 0:
            return QI(0)
        w2 = _w_value(m2, k)
        w1 = _w_value(m, mid)
        if w1 == 0 or w2 == 0:
            return QI(0)
        wp = _w_value(p, k)
        if wp == 0:
            return QI(0)
        v1 = ev1.value(mid)
        v2 = ev2.value(k)
        return v1 * v2 * QI(_sqrt_fraction(w1 * w2 / wp))

    def try_invert(self):
        """Model of the star-inverse class, when the shape is supported."""
        if len(self.bands) != 1:
            return None
        (m, ev), = self.bands.items()
        if ev.exc:
            return None
        v = ev.rf
        if v.is_zero():
            return None
        # require no zeros/poles of v at integers >= -2m (validity range)
        lo = max(0, -2 * m)
        for k in range(lo, lo + 80):
            if not v.finite_at(k) or v.eval(k).is_zero():
                return None
        try:
            inv_prof = v.shift(-2 * m).inv() * _weight_profile_inv(m)
        except ZeroDivisionError:
            return None
        exc = {}
        lo2 = max(0, 2 * m)
        for k in range(0, lo2):
            exc[k] = QI(0)
        for k in range(lo2, lo2 + 4):
            if not inv_prof.finite_at(k):
                return None
        return SpectralModel({-m: EvRational(inv_prof, exc)})

    def dense(self, size: int):
        import numpy as np
        M = np.zeros((size, size), dtype=complex)
        for m in self.bands:
            for k in range(size):
                if 0 <= k + 2 * m < size:
                    M[k + 2 * m, k] = complex(self.element(m, k))
        return M

    # ------------------------------------------------------------ traces
    def res_value(self) -> QI:
        """Residue at z=0 of sum_k diag(k) (2k+1)^{-z}: half the 1/(2k+1) weight."""
        d = self.diag().rf
        q, proper = d.poly_and_proper()
        if proper.is_zero() or proper.decay_gap() > 1:
            return QI(0)
        if proper.decay_gap() < 1:
            raise ArithmeticError("diagonal grows; residue undefined here")
        # proper ~ L/k = 2L/(2k+1)
        return proper.leading_ratio() * QI(Fraction(1, 1))

    def trh_value(self):
        """Constant term at z=0 of sum_k diag(k)(2k+1)^{-z}.

        The series is split at an index past every exceptional value and
        every integer pole of the rational profile; the head sums plainly
        and the tail continues in closed form.  Returns QI when exact.
        """
        ev = self.diag()
        key = (tuple(ev.rf.num), tuple(ev.rf.den),
               tuple(sorted(ev.exc.items())))
        hit = _TRH_CACHE.get(key)
        if hit is not None:
            return hit
        val = self._trh_value_uncached(ev)
        _TRH_CACHE[key] = val
        return val

    def _trh_value_uncached(self, ev):
        d = ev.rf
        k0 = max([8] + [k + 1 for k in ev.exc])
        for k in range(0, 400):
            if not d.finite_at(k):
                k0 = max(k0, k + 1)
        head = QI(0)
        for k in range(k0):
            head = head + ev.value(k)
        q, proper = d.poly_and_proper()
        acc_exact = head
        if q:
            zm = ZetaModel.from_kpoly(KPoly(q))
            acc_exact = acc_exact + zm.trh_value()
            for k in range(k0):
                acc_exact = acc_exact - _peval(q, k)
        if proper.is_zero():
            return acc_exact
        gap = proper.decay_gap()
        if gap < 1:
            raise ArithmeticError("diagonal grows; unexpected shape")
        c1 = QI(0)
        if gap == 1:
            c1 = proper.leading_ratio() * 2  # coefficient of (2k+1)^{-1}
        mp.mp.dps = 40
        harm = QI(0)
        for k in range(k0):
            harm = harm + QI(Fraction(1, 2 * k + 1))
        tail = _rational_tail(proper, c1, k0)
        total = (complex(acc_exact)
                 + complex(c1) * (GAMMA_LN2_HALF - complex(harm))
                 + complex(tail))
        return total


def _rational_roots(den):
    """Factor a monic QI polynomial into linear factors, or None.

    Root candidates come from rational-root search on the real part; the
    profiles arising here have roots at (shifted) rationals.
    """
    poly = list(den)
    roots = []
    guard = 0
    while len(poly) > 1:
        guard += 1
        if guard > 64:
            return None
        root = _find_rational_root(poly)
        if root is None:
            return None
        roots.append(root)
        # synthetic division by (k - root)
        quot = [QI(0)] * (len(poly) - 1)
        carry = poly[-1]
        for i in range(len(poly) - 2, -1, -1):
            quot[i] = carry
            carry = poly[i] + carry * QI(root)
        if not carry.is_zero():
            return None
        poly = quot
    return roots


def _find_rational_root(poly):
    c0 = poly[0]
    lead = poly[-1]
    if c0.is_zero():
        return Fraction(0)
    if not all(c.im == 0 for c in poly):
        cands = []
    else:
        p0 = c0.re
        pl = lead.re
        nums = {d for d in _divisors(abs(p0.numerator) * p0.denominator)} | {1}
        dens = {d for d in _divisors(abs(pl.numerator) * pl.denominator)} | {1}
        cands = []
        for a in nums:
            for b in dens:
                for s in (1, -1):
                    cands.append(Fraction(s * a, b))
                    cands.append(Fraction(s * a, 2 * b))
    for r in cands:
        acc = QI(0)
        for c in reversed(poly):
            acc = acc * QI(r) + c
        if acc.is_zero():
            return r
    return None


def _divisors(n: int):
    n = abs(n)
    if n == 0:
        return {1}
    out = set()
    i = 1
    while i * i <= n and i < 4000:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return out


def _rational_tail(proper: RatFunc, c1: QI, k0: int):
    """sum_{k >= k0} [proper(k) - c1/(2k+1)], by digamma closed form when
    the denominator splits over the rationals with simple roots, else by
    accelerated summation."""
    roots = _rational_roots(proper.den)
    if roots is not None and len(set(roots)) == len(roots):
        # partial fractions: proper = sum res_r / (k - r)+ lower... only
        # valid when deg num < deg den (true) and poles simple
        total = mp.mpc(0)
        residues = []
        for r in roots:
            num_v = _peval(proper.num, Fraction(r))
            den_v = QI(1)
            for r2 in roots:
                if r2 != r:
                    den_v = den_v * (QI(r) - QI(r2))
            residues.append((num_v / den_v, r))
        # subtract c1/(2k+1) = (c1/2)/(k+1/2)
        pieces = [(res, -Fraction(r)) for res, r in residues]
        pieces.append((c1 * QI(Fraction(-1, 2)), Fraction(1, 2)))
        if all(k0 + a > 0 for _, a in pieces):
            # sum of res/(k+a) with total residue zero: -sum res psi(k0+a)
            for res, a in pieces:
                total += _mpc(res) * (-mp.digamma(k0 + mp.mpf(a.numerator)
                                                  / a.denominator))
            return total
    num = [_mpc(c) for c in proper.num]
    den = [_mpc(c) for c in proper.den]
    c1m = _mpc(c1)

    def term(k):
        nv = mp.mpc(0)
        for c in reversed(num):
            nv = nv * k + c
        dv = mp.mpc(0)
        for c in reversed(den):
            dv = dv * k + c
        return nv / dv - c1m / (2 * k + 1)

    return mp.nsum(term, [k0, mp.inf])


def _mpc(c: QI):
    return mp.mpc(mp.mpf(c.re.numerator) / c.re.denominator,
                  mp.mpf(c.im.numerator) / c.im.denominator)


def attach_model(sym):
    """Return the symbol with an exact band model when constructible."""
    from .weyl import FormalSymbol
    if sym.model is not None or sym.n != 1:
        return sym
    if not sym.is_even() or not sym.is_polynomial():
        return sym
    total = None
    for d, h in sym.comps.items():
        total = h.num if total is None else total + h.num
    if total is None:
        return FormalSymbol(sym.n, {}, sym.cutoff, SpectralModel.zero())
    from .oscillator import weyl_normal_ordered
    model = SpectralModel.from_normal_ordered(weyl_normal_ordered(total))
    return FormalSymbol(sym.n, dict(sym.comps), sym.cutoff, model)


def _weight_profile_inv(m: int) -> RatFunc:
    """1 / w_m(k - 2m) as a rational profile (for pseudo-inverses)."""
    cnt = _w_counter(m, -2 * m)
    return RatFunc([QI(1)], _from_counter(cnt))
