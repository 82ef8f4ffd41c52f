"""Unitary connection data on the trivialized torus model (one oscillator
degree of freedom, torus dimension three by default).

The connection 1-form has purely imaginary scalar coefficients; acting on
symbol-valued forms it becomes the star-commutator with its quadratic
generator, so covariant derivatives and curvatures stay inside the exact
symbol calculus.
"""

from __future__ import annotations

from fractions import Fraction

from .forms import ExtForm
from .scalars import QI
from .torus import ComplexFiber, Section, SymbolFiber, MatrixSymbolFiber
from .weyl import FormalSymbol, MatrixSymbol, QuadraticElement, mu_inv


class ConnectionData:
    """beta: ExtForm of degree 1 with anti-Hermitian scalar coefficients."""

    def __init__(self, beta: ExtForm):
        assert beta.degree == 1
        for s in beta.comps.values():
            conj = s.conj()
            if not (s + conj).is_zero_strict():
                raise ValueError("connection form must be anti-Hermitian")
        self.beta = beta
        self.d = beta.d

    @staticmethod
    def abelian(d: int, modes) -> "ConnectionData":
        """Build i * (real 1-form) from {(axis, freq vector): QI amplitude};
        each mode enters together with its conjugate to keep the form real."""
        fib = ComplexFiber()
        comps: dict[tuple, Section] = {}
        for (axis, K), amp in modes.items():
            amp = QI.of(amp)
            waves = comps.get((axis,), Section(d, fib)).waves
            new = dict(waves)
            for KK, vv in [(tuple(K), amp * QI(0, 1)),
                           (tuple(-k for k in K), amp.conj() * QI(0, 1))]:
                cur = new.get(KK, QI(0)) + vv
                if cur.is_zero():
                    new.pop(KK, None)
                else:
                    new[KK] = cur
            comps[(axis,)] = Section(d, fib, new)
        return ConnectionData(ExtForm(d, 1, fib, comps))


def beta_plus(conn: ConnectionData, cutoff: int = 12) -> ExtForm:
    """The quadratic-symbol-valued connection form matched through mu."""
    fib = SymbolFiber(1, cutoff)
    out = {}
    for I, s in conn.beta.comps.items():
        waves = {}
        for K, c in s.waves.items():
            # u(1) value i*im acts on R^2 as im * J_std; its generator is
            # the purely imaginary quadratic -i*im*rho^2/2
            im = c.im
            A = [[Fraction(0), im], [-im, Fraction(0)]]
            X = mu_inv(A)
            waves[K] = X.as_symbol(cutoff=None)
        out[I] = Section(conn.d, fib, waves)
    return ExtForm(conn.d, 1, fib, out)


class CurvaturePair:
    def __init__(self, theta: ExtForm, theta_plus: ExtForm):
        self.theta = theta
        self.theta_plus = theta_plus
        self.theta_minus = -theta_plus


def curvature(conn: ConnectionData, cutoff: int = 12) -> CurvaturePair:
    """theta = d beta + [beta, beta]/2 (the bracket vanishes abelianly)."""
    theta = conn.beta.ext_d() + conn.beta.graded_comm(conn.beta).scale(Fraction(1, 2))
    bp = beta_plus(conn, cutoff)
    theta_plus = bp.ext_d() + bp.graded_comm(bp).scale(Fraction(1, 2))
    return CurvaturePair(theta, theta_plus)


def promote_matrix(form: ExtForm, q: int, op: bool = False,
                   cutoff: int = 12) -> ExtForm:
    """Scalar-symbol-valued form as a diagonal matrix-symbol-valued form."""
    fib = MatrixSymbolFiber(q, 1, cutoff, op=op)

    def lift(sym: FormalSymbol) -> MatrixSymbol:
        return MatrixSymbol([[sym if i == j else FormalSymbol.zero(1)
                              for j in range(q)] for i in range(q)])

    return form.map_sections(lambda s: s.map_fibers(lift, fib), fib)


def nabla(eta: ExtForm, conn_form: ExtForm, sign: int = +1) -> ExtForm:
    """Covariant derivative d + graded star-commutator with the connection.

    `conn_form` must already live in the same fiber algebra as `eta` (use
    promote_matrix for matrix coefficients).  sign -1 gives the opposite
    module derivative, realized by the commutator with -conn_form in the
    opposite product; the fiber algebra of `eta` carries the op flag.
    """
    cf = conn_form if sign > 0 else _negate(conn_form)
    return eta.ext_d() + _graded_comm_mixed(cf, eta)


def _negate(f: ExtForm) -> ExtForm:
    return f.scale(-1)


def _graded_comm_mixed(a: ExtForm, b: ExtForm) -> ExtForm:
    """[a, b] with a of odd form degree, products in b's fiber algebra."""
    a_in_b = ExtForm(b.d, a.degree, b.fib,
                     {I: _refiber(s, b.fib) for I, s in a.comps.items()})
    first = a_in_b.wedge(b)
    second = b.wedge(a_in_b)
    if (a.degree * b.degree) % 2:
        return first + second
    return first - second


def _refiber(s: Section, fib) -> Section:
    if s.fib is fib or s.fib.kind == fib.kind:
        return Section(s.d, fib, s.waves)
    if fib.kind.startswith("matsym"):
        q = fib.q
        def lift(sym):
            return MatrixSymbol([[sym if i == j else FormalSymbol.zero(1)
                                  for j in range(q)] for i in range(q)])
        return Section(s.d, fib, {K: lift(v) for K, v in s.waves.items()})
    return Section(s.d, fib, s.waves)
