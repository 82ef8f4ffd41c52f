"""Homogeneous rational functions on R^{2n} minus the origin.

These are the coefficient class for polyhomogeneous Weyl symbols: closed
under partial derivatives, products, and pointwise inversion, and dense
enough for every identity exercised by the test suite.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, grid_points, rho2
from .scalars import QI


class DenominatorVanishes(ValueError):
    """Denominator has a zero (numerically) on the unit sphere."""


class NotHomogeneous(ValueError):
    pass


_GRID_CACHE: dict[int, list] = {}


def _sphere_grid(nvars: int):
    if nvars not in _GRID_CACHE:
        _GRID_CACHE[nvars] = grid_points(nvars, 720 if nvars == 2 else 600)
    return _GRID_CACHE[nvars]


def _min_abs_on_sphere(p: Poly) -> float:
    """Smallest |p| on the sphere grid, relative to the coefficient scale."""
    scale = max((abs(complex(c)) for c in p.terms.values()), default=1.0)
    return min(abs(p.eval_complex(pt)) for pt in _sphere_grid(p.nvars)) / scale


class HomogRat:
    """num/den with both parts homogeneous; den nowhere zero on the sphere.

    Canonical form: common rho^2 factors cancelled, den leading coefficient
    normalized to 1.  `den_rho_power` is set when den == rho^(2p), which
    unlocks the exact sphere-integration path.
    """

    __slots__ = ("num", "den", "deg", "den_rho_power", "_dcache")

    def __init__(self, num: Poly, den: Poly = None, check: bool = True):
        nv = num.nvars
        if den is None:
            den = Poly.constant(nv, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        dn = den.is_homogeneous()
        if dn is None:
            raise NotHomogeneous("denominator not homogeneous")
        if not num.is_zero():
            dm = num.is_homogeneous()
            if dm is None:
                raise NotHomogeneous("numerator not homogeneous")
        else:
            dm = dn  # degree convention for zero
        num, den = _cancel_rho2(num, den)
        # normalize denominator leading coefficient to 1
        lead = den.terms[den.leading_key()]
        if not (lead.re == 1 and lead.im == 0):
            inv = lead.inv()
            den = den.scale(inv)
            num = num.scale(inv)
        self.num = num
        self.den = den
        self.deg = (num.is_homogeneous() if not num.is_zero() else dm) - den.is_homogeneous()
        self.den_rho_power = _rho_power_of(den)
        self._dcache = None
        if check and self.den_rho_power is None:
            if _min_abs_on_sphere(den) < 5e-3:
                raise DenominatorVanishes(f"denominator {den} vanishes on the sphere")

    # ------------------------------------------------------------ helpers
    @staticmethod
    def _raw(num: Poly, den: Poly, deg: int, rho_pow) -> "HomogRat":
        """Trusted constructor for internal arithmetic on canonical parts."""
        h = HomogRat.__new__(HomogRat)
        h.num = num
        h.den = den
        h.deg = deg
        h.den_rho_power = rho_pow
        h._dcache = None
        return h

    @staticmethod
    def from_poly(p: Poly) -> "HomogRat":
        return HomogRat(p)

    @staticmethod
    def zero(nvars: int, deg: int = 0) -> "HomogRat":
        return HomogRat._raw(Poly(nvars), Poly.constant(nvars, 1), deg, 0)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_homogeneous() == 0

    # ------------------------------------------------------------ algebra
    def __add__(self, other: "HomogRat") -> "HomogRat":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.deg != other.deg:
            raise NotHomogeneous("adding different homogeneity degrees")
        p1, p2 = self.den_rho_power, other.den_rho_power
        if p1 is not None and p2 is not None:
            if p1 <= p2:
                num = self.num * rho2_power(self.num.nvars, p2 - p1) + other.num
                p = p2
            else:
                num = self.num + other.num * rho2_power(self.num.nvars, p1 - p2)
                p = p1
            return _rho_reduced(num, p, self.deg)
        if self.den == other.den:
            return HomogRat(self.num + other.num, self.den, check=False)
        return HomogRat(self.num * other.den + other.num * self.den,
                        self.den * other.den, check=False)

    def __neg__(self):
        return HomogRat._raw(-self.num, self.den, self.deg, self.den_rho_power)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HomogRat):
            return self.scale(other)
        p1, p2 = self.den_rho_power, other.den_rho_power
        if p1 is not None and p2 is not None:
            return _rho_reduced(self.num * other.num, p1 + p2,
                                self.deg + other.deg)
        return HomogRat(self.num * other.num, self.den * other.den, check=False)

    __rmul__ = __mul__

    def scale(self, c) -> "HomogRat":
        num = self.num.scale(c)
        if num.is_zero():
            return HomogRat.zero(self.num.nvars)
        return HomogRat._raw(num, self.den, self.deg, self.den_rho_power)

    def reciprocal(self) -> "HomogRat":
        """Pointwise inverse; validates the new denominator on the sphere."""
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return HomogRat(self.den, self.num, check=True)

    def conj(self) -> "HomogRat":
        return HomogRat(self.num.conj(), self.den.conj(), check=False)

    def partial(self, i: int) -> "HomogRat":
        if self.is_zero():
            return self
        if self.den_rho_power == 0:
            num = self.num.partial(i)
            if num.is_zero():
                return HomogRat.zero(self.num.nvars)
            return HomogRat._raw(num, self.den, self.deg - 1, 0)
        if self.den_rho_power is not None:
            # d/dv_i (num / rho^{2p}) = (rho^2 num_i - 2p v_i num) / rho^{2p+2}
            p = self.den_rho_power
            r2 = rho2(self.num.nvars)
            vi = Poly.var(self.num.nvars, i)
            num = r2 * self.num.partial(i) - (vi * self.num).scale(2 * p)
            return _rho_reduced(num, p + 1, self.deg - 1)
        num = self.num.partial(i) * self.den - self.num * self.den.partial(i)
        return HomogRat(num, self.den * self.den, check=False)

    def partial_multi(self, exps) -> "HomogRat":
        h = self
        for i, k in enumerate(exps):
            for _ in range(k):
                h = h.partial(i)
                if h.is_zero():
                    return h
        return h

    def compose_linear(self, mat) -> "HomogRat":
        return HomogRat(self.num.compose_linear(mat),
                        self.den.compose_linear(mat), check=True)

    def eval_complex(self, pt) -> complex:
        return self.num.eval_complex(pt) / self.den.eval_complex(pt)

    def __eq__(self, other):
        if not isinstance(other, HomogRat):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.deg, len(self.num.terms)))

    def norm_hint(self) -> float:
        if self.is_zero():
            return 0.0
        return max(abs(complex(c)) for c in self.num.terms.values()) / max(
            abs(complex(c)) for c in self.den.terms.values())

    def __repr__(self):
        if self.is_poly():
            return repr(self.num)
        return f"({self.num})/({self.den})"


_RHO_POWERS: dict[tuple[int, int], Poly] = {}


def rho2_power(nvars: int, p: int) -> Poly:
    key = (nvars, p)
    if key not in _RHO_POWERS:
        _RHO_POWERS[key] = rho2(nvars) ** p
    return _RHO_POWERS[key]


def _rho_power_of(den: Poly):
    """Return p if den == rho2^p (den is monic by construction)."""
    d = den.is_homogeneous()
    if d is None or d % 2:
        return None
    p = d // 2
    if den == rho2_power(den.nvars, p):
        return p
    return None


def _rho_reduced(num: Poly, p: int, deg: int) -> HomogRat:
    """num / rho^{2p} with cheap cancellation; inputs already homogeneous."""
    nv = num.nvars
    if num.is_zero():
        return HomogRat.zero(nv)
    r2 = rho2(nv)
    while p > 0 and _maybe_divisible_rho2(num):
        q = num.try_divide(r2)
        if q is None:
            break
        num = q
        p -= 1
    return HomogRat._raw(num, rho2_power(nv, p), deg, p)


_NULL_POINTS: dict[int, list] = {}


def _null_points(nvars: int):
    """Complex points with rho^2 = 0, for a cheap divisibility reject."""
    if nvars not in _NULL_POINTS:
        if nvars == 2:
            pts = [(1.0, 1j), (1.0, -1j)]
        else:
            import cmath
            pts = []
            for s in range(3):
                base = [cmath.exp(1j * (0.37 + s + i)) for i in range(nvars - 1)]
                sq = sum(b * b for b in base)
                pts.append(tuple(base) + (1j * cmath.sqrt(sq),))
        _NULL_POINTS[nvars] = pts
    return _NULL_POINTS[nvars]


def _maybe_divisible_rho2(p: Poly) -> bool:
    try:
        for pt in _null_points(p.nvars):
            if abs(p.eval_complex(pt)) > 1e-8 * (1 + _coeff_scale(p)):
                return False
    except (OverflowError, ValueError):
        return True
    return True


def _coeff_scale(p: Poly) -> float:
    return max((abs(complex(c)) for c in p.terms.values()), default=0.0)


def _cancel_rho2(num: Poly, den: Poly):
    r2 = rho2(num.nvars)
    if num.is_zero():
        return num, Poly.constant(num.nvars, 1)
    p = _rho_power_of_raw(den)
    if p is not None:
        lead = den.terms[den.leading_key()]
        if not (lead.re == 1 and lead.im == 0):
            num = num.scale(lead.inv())
        # cancel rho^2 factors out of num only; den collapses by cache lookup
        drops = 0
        while drops < p:
            if not _maybe_divisible_rho2(num):
                break
            qn = num.try_divide(r2)
            if qn is None:
                break
            num = qn
            drops += 1
        return num, rho2_power(num.nvars, p - drops)
    while True:
        if not _maybe_divisible_rho2(num):
            return num, den
        qn = num.try_divide(r2)
        if qn is None:
            return num, den
        qd = den.try_divide(r2)
        if qd is None:
            return num, den
        num, den = qn, qd


def _rho_power_of_raw(den: Poly):
    d = den.is_homogeneous()
    if d is None or d % 2:
        return None
    p = d // 2
    lead = den.terms.get(den.leading_key())
    ref = rho2_power(den.nvars, p)
    if lead is None:
        return None
    if not (lead.re == 1 and lead.im == 0):
        scaled = den.scale(lead.inv())
        return p if scaled == ref else None
    return p if den == ref else None


def log_rho2_derivative(nvars: int, exps) -> HomogRat:
    """Derivative of log(rho^2) by the multi-index `exps` (|exps| >= 1)."""
    assert any(exps), "need at least one derivative"
    first = next(i for i, k in enumerate(exps) if k)
    rest = list(exps)
    rest[first] -= 1
    base = HomogRat(Poly.var(nvars, first).scale(2), rho2(nvars))
    return base.partial_multi(rest)
