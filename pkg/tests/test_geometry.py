"""Torus forms, connections, curvature, and the genus form."""

import math
import random
from fractions import Fraction

from heischar.connection import ConnectionData, beta_plus, curvature, nabla
from heischar.forms import (ExtForm, FormSum, a_hat_form, form_matrix_trace,
                            form_matrix_wedge, integrate_top)
from heischar.poly import Poly, rho2
from heischar.scalars import QI
from heischar.torus import ComplexFiber, Section, SymbolFiber
from heischar.weyl import FormalSymbol, iota

D = 3
FIB = ComplexFiber()
RNG = random.Random(31)


def rsec():
    return Section(D, FIB, {(RNG.randint(-2, 2), RNG.randint(-2, 2),
                             RNG.randint(-2, 2)):
                            QI(Fraction(RNG.randint(-3, 3), 2),
                               Fraction(RNG.randint(-2, 2), 3))
                            for _ in range(3)})


class TestExterior:
    def test_d_constant(self):
        f = ExtForm.constant(D, FIB, QI(4))
        assert f.ext_d().is_zero()

    def test_d_squared(self):
        for _ in range(8):
            f = ExtForm(D, 1, FIB, {(i,): rsec() for i in range(3)})
            assert f.ext_d().ext_d().strict_zero()

    def test_fourier_mode_derivative(self):
        s = Section(D, FIB, {(0, 1, 0): QI(1)})
        f = ExtForm(D, 1, FIB, {(0,): s})
        df = f.ext_d()
        assert (1, 0) in df.comps or (0, 1) in df.comps
        # d(e^{i y_1} dy_0) = -i e^{i y_1} dy_0 ^ dy_1
        got = df.component((0, 1))
        assert got.waves[(0, 1, 0)] == QI(0, -1)

    def test_integrate_constant_volume(self):
        dvol = ExtForm(D, 3, FIB, {(0, 1, 2): Section.constant(D, FIB, QI(1))})
        assert abs(integrate_top(dvol) - (2 * math.pi) ** 3) < 1e-12

    def test_integrate_mode_vanishes(self):
        f = ExtForm(D, 3, FIB, {(0, 1, 2): Section(D, FIB, {(1, 0, 0): QI(1)})})
        assert integrate_top(f) == 0

    def test_integrate_linear(self):
        f = ExtForm(D, 3, FIB, {(0, 1, 2): rsec()})
        g = ExtForm(D, 3, FIB, {(0, 1, 2): rsec()})
        assert abs(integrate_top(f + g) - integrate_top(f) - integrate_top(g)) \
            < 1e-12


class TestConnection:
    def setup_method(self):
        self.conn = ConnectionData.abelian(
            D, {(0, (0, 1, 0)): Fraction(1, 2), (2, (1, 0, 0)): Fraction(1, 3)})
        self.cur = curvature(self.conn, cutoff=10)
        self.bp = beta_plus(self.conn, cutoff=10)

    def test_abelian_curvature_is_dbeta(self):
        assert self.cur.theta.eq(self.conn.beta.ext_d())

    def test_bianchi_scalar(self):
        assert self.cur.theta.ext_d().strict_zero()

    def test_flat_nabla_is_d(self):
        flat = ConnectionData.abelian(D, {})
        bp0 = beta_plus(flat, cutoff=10)
        sfib = SymbolFiber(1, 10)
        eta = ExtForm.function(Section.constant(
            D, sfib, FormalSymbol.from_poly(rho2(2))))
        assert (nabla(eta, bp0) - eta.ext_d()).strict_zero()

    def test_curvature_commutator(self):
        sfib = SymbolFiber(1, 10)
        x = Poly.var(2, 0)
        eta = ExtForm.function(Section(
            D, sfib, {(0, 0, 1): FormalSymbol.from_poly(x * x + rho2(2))}))
        nn = nabla(nabla(eta, self.bp), self.bp)
        assert (nn - self.cur.theta_plus.graded_comm(eta)).strict_zero()

    def test_bianchi_plus(self):
        assert nabla(self.cur.theta_plus, self.bp).strict_zero()

    def test_minus_module_intertwines_involution(self):
        sfib = SymbolFiber(1, 10)
        ofib = SymbolFiber(1, 10, op=True)
        x = Poly.var(2, 0)
        eta = ExtForm.function(Section(
            D, sfib, {(1, 0, 0): FormalSymbol.from_poly(x * x)}))
        eta_i = eta.map_sections(lambda s: s.map_fibers(iota, ofib), ofib)
        lhs = nabla(eta_i, self.bp, sign=-1)
        rhs = nabla(eta, self.bp).map_sections(
            lambda s: s.map_fibers(iota, ofib), ofib)
        assert (lhs - rhs).strict_zero()

    def test_trace_compatibility(self):
        # Trh(nabla a) = d Trh(a) and Trh[theta+, a] = 0, exact spectral path
        from heischar.character import CharConfig, CharContext, _trace_form
        cfg = CharConfig(d=D, cutoff=10)
        ctx = CharContext(self.conn, cfg)
        sfib = SymbolFiber(1, 10)
        a = Section(D, sfib, {(0, 1, 0): FormalSymbol.from_poly(rho2(2) ** 2),
                              (0, 0, 0): FormalSymbol.from_poly(
                                  Poly.var(2, 0) * Poly.var(2, 1))})
        lifted = ExtForm.function(a)
        lhs = _trace_form(nabla(lifted, ctx.bp), cfg, use_res=False)
        rhs = _trace_form(lifted, cfg, use_res=False).ext_d()
        assert (lhs - rhs).norm() < 1e-12
        comm = ctx.theta_plus.graded_comm(lifted)
        assert _trace_form(comm, cfg, use_res=False).norm() < 1e-12


class TestGenusForm:
    def test_torus3_is_one(self):
        zero2 = ExtForm.zero(D, 2, FIB)
        w = ConnectionData.abelian(D, {(0, (0, 0, 1)): Fraction(1, 2)}).beta.ext_d()
        R = [[zero2, w], [-w, zero2]]
        ah = a_hat_form(R)
        assert sorted(ah.parts) == [0]
        assert ah.part(0).component(()).zero_mode() == QI(1)

    def test_degree_four_term_is_first_pontryagin(self):
        # synthetic 5-torus curvature; series term vs -p1/24 directly
        d5 = 5
        fib = ComplexFiber()
        w1 = ExtForm(d5, 2, fib, {(0, 1): Section.constant(d5, fib, QI(2))})
        w2 = ExtForm(d5, 2, fib, {(2, 3): Section.constant(d5, fib, QI(3)),
                                  (1, 2): Section(d5, fib,
                                                  {(0, 0, 0, 1, 0): QI(1),
                                                   (0, 0, 0, -1, 0): QI(1)})})
        z = ExtForm.zero(d5, 2, fib)
        R = [[z, w1, z], [-w1, z, w2], [z, -w2, z]]
        ah = a_hat_form(R)
        got = ah.part(4)
        rr = form_matrix_trace(form_matrix_wedge(R, R))
        p1 = rr.scale(-1.0 / (8 * math.pi ** 2))
        want = p1.scale(Fraction(-1, 24))
        assert (got - want).norm() < 1e-12
        for p in ah.parts:
            assert p % 4 == 0
