"""Exterior forms on the torus with section coefficients.

Components are indexed by strictly increasing coordinate multi-indices;
coefficients are torus sections over any fiber algebra.  Wedge products,
the exterior derivative, top-degree integration, and the curvature genus
form all live here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .scalars import QI
from .torus import ComplexFiber, Section


def _merge_sign(I, J):
    """Shuffle sign for concatenating increasing multi-indices, or None."""
    if set(I) & set(J):
        return None, None
    arr = list(I) + list(J)
    inv = 0
    for a in range(len(arr)):
        for b in range(a + 1, len(arr)):
            if arr[a] > arr[b]:
                inv += 1
    return tuple(sorted(arr)), (-1 if inv % 2 else 1)


class ExtForm:
    """Degree-p form: {increasing index tuple: Section}."""

    __slots__ = ("d", "degree", "fib", "comps")

    def __init__(self, d: int, degree: int, fib, comps=None):
        self.d = d
        self.degree = degree
        self.fib = fib
        self.comps = {}
        for I, s in (comps or {}).items():
            if not s.is_zero():
                self.comps[tuple(I)] = s

    @staticmethod
    def zero(d: int, degree: int, fib) -> "ExtForm":
        return ExtForm(d, degree, fib, {})

    @staticmethod
    def function(sec: Section) -> "ExtForm":
        return ExtForm(sec.d, 0, sec.fib, {(): sec})

    @staticmethod
    def constant(d: int, fib, v) -> "ExtForm":
        return ExtForm.function(Section.constant(d, fib, v))

    def component(self, I) -> Section:
        return self.comps.get(tuple(I), Section(self.d, self.fib))

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        assert self.degree == other.degree
        out = dict(self.comps)
        for I, s in other.comps.items():
            if I in out:
                t = out[I] + s
                if t.is_zero():
                    del out[I]
                else:
                    out[I] = t
            else:
                out[I] = s
        return ExtForm(self.d, self.degree, self.fib, out)

    def __neg__(self):
        return ExtForm(self.d, self.degree, self.fib,
                       {I: -s for I, s in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExtForm":
        return ExtForm(self.d, self.degree, self.fib,
                       {I: s.scale(c) for I, s in self.comps.items()})

    def map_sections(self, fn, fib=None) -> "ExtForm":
        out = {}
        for I, s in self.comps.items():
            t = fn(s)
            if not t.is_zero():
                out[I] = t
        return ExtForm(self.d, self.degree, fib or self.fib, out)

    def wedge(self, other: "ExtForm") -> "ExtForm":
        """Graded product; coefficients multiply in the fiber algebra."""
        out = {}
        for I, s in self.comps.items():
            for J, t in other.comps.items():
                M, sign = _merge_sign(I, J)
                if M is None:
                    continue
                prod = s.mul(t)
                if sign < 0:
                    prod = -prod
                if M in out:
                    acc = out[M] + prod
                    if acc.is_zero():
                        del out[M]
                    else:
                        out[M] = acc
                elif not prod.is_zero():
                    out[M] = prod
        return ExtForm(self.d, self.degree + other.degree, self.fib, out)

    def ext_d(self) -> "ExtForm":
        """Exterior derivative via exact Fourier differentiation."""
        out = {}
        for I, s in self.comps.items():
            for j in range(self.d):
                if j in I:
                    continue
                ds = s.partial(j)
                if ds.is_zero():
                    continue
                M, sign = _merge_sign((j,), I)
                piece = ds if sign > 0 else -ds
                if M in out:
                    acc = out[M] + piece
                    if acc.is_zero():
                        del out[M]
                    else:
                        out[M] = acc
                else:
                    out[M] = piece
        return ExtForm(self.d, self.degree + 1, self.fib, out)

    def graded_comm(self, other: "ExtForm") -> "ExtForm":
        swap = other.wedge(self)
        if (self.degree * other.degree) % 2:
            return self.wedge(other) + swap
        return self.wedge(other) - swap

    def norm(self) -> float:
        return sum(s.norm() for s in self.comps.values())

    def eq(self, other) -> bool:
        return (self - other).strict_zero()

    def strict_zero(self) -> bool:
        return all(s.is_zero_strict() for s in self.comps.values())

    def __repr__(self):
        return f"ExtForm(deg={self.degree}, comps={sorted(self.comps)})"


def integrate_top(f: ExtForm) -> complex:
    """(2 pi)^d times the zero-frequency coefficient of the top component."""
    if f.degree != f.d:
        raise ValueError("integration needs a top-degree form")
    top = f.component(tuple(range(f.d)))
    v = top.zero_mode()
    if isinstance(v, QI):
        v = complex(v)
    return v * (2 * math.pi) ** f.d


def form_matrix_wedge(A, B):
    """Matrix product of matrices of forms, entries combined by wedge."""
    q = len(A)
    out = []
    for i in range(q):
        row = []
        for j in range(q):
            acc = None
            for t in range(q):
                term = A[i][t].wedge(B[t][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def form_matrix_trace(A) -> ExtForm:
    acc = A[0][0]
    for i in range(1, len(A)):
        acc = acc + A[i][i]
    return acc


class FormSum:
    """Finite family of forms of distinct degrees."""

    __slots__ = ("d", "fib", "parts")

    def __init__(self, d: int, fib, parts=None):
        self.d = d
        self.fib = fib
        self.parts = {}
        for p, f in (parts or {}).items():
            if not f.is_zero():
                self.parts[p] = f

    @staticmethod
    def of(*forms: ExtForm) -> "FormSum":
        d, fib = forms[0].d, forms[0].fib
        out = FormSum(d, fib)
        for f in forms:
            out = out + f
        return out

    def part(self, p: int) -> ExtForm:
        return self.parts.get(p, ExtForm.zero(self.d, p, self.fib))

    def is_zero(self):
        return not self.parts

    def __add__(self, other):
        if isinstance(other, ExtForm):
            other = FormSum(self.d, self.fib, {other.degree: other})
        out = dict(self.parts)
        for p, f in other.parts.items():
            g = out.get(p)
            s = f if g is None else g + f
            if s.is_zero():
                out.pop(p, None)
            else:
                out[p] = s
        return FormSum(self.d, self.fib, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "FormSum":
        return FormSum(self.d, self.fib,
                       {p: f.scale(c) for p, f in self.parts.items()})

    def wedge(self, other: "FormSum") -> "FormSum":
        out = FormSum(self.d, self.fib)
        for p, f in self.parts.items():
            for q, g in other.parts.items():
                if p + q > self.d:
                    continue
                out = out + f.wedge(g)
        return out

    def ext_d(self) -> "FormSum":
        out = FormSum(self.d, self.fib)
        for f in self.parts.values():
            out = out + f.ext_d()
        return out

    def norm(self) -> float:
        return sum(f.norm() for f in self.parts.values())

    def __repr__(self):
        return f"FormSum(degrees={sorted(self.parts)})"


def a_hat_form(riemann) -> FormSum:
    """Genus form of an antisymmetric matrix of curvature 2-forms.

    det^{1/2} of (W / sinh W) with W^2 = -(R/4 pi)^2, expanded through the
    available form degrees; on a 3-torus only the constant 1 survives.
    """
    q = len(riemann)
    d = riemann[0][0].d
    fib = riemann[0][0].fib
    for i in range(q):
        for j in range(q):
            if not (riemann[i][j] + riemann[j][i]).strict_zero():
                raise ValueError("curvature matrix must be antisymmetric")
    one = ExtForm.constant(d, fib, fib.unit())
    out = FormSum.of(one)
    if d < 4:
        return out
    w2 = form_matrix_wedge(riemann, riemann)
    tr_w2 = form_matrix_trace(w2)
    # log(x/sinh x) = -x^2/6 + x^4/180 + ..., W2 = -(R wedge R)/(16 pi^2):
    # exp(tr log / 2) = 1 - tr(W2)/12 + tr(W2^2)/360 + (tr W2)^2/288 + ...
    out = out + tr_w2.scale(1.0 / (192.0 * math.pi ** 2))
    if d >= 8:
        w4 = form_matrix_wedge(w2, w2)
        out = out + form_matrix_trace(w4).scale(1.0 / (360.0 * 256.0 * math.pi ** 4))
        out = out + tr_w2.wedge(tr_w2).scale(1.0 / (288.0 * 256.0 * math.pi ** 4))
    return out
