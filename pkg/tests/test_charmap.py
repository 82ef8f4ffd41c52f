"""Extension algebra, the characteristic maps, and the index pairing."""

import math
import random
from fractions import Fraction

import pytest

from heischar.character import (CharConfig, CharContext, TripleChain, UChain,
                                ch_extension, char_plus, char_residue,
                                char_total, character_form, extension_boundary,
                                index_pairing, uchern, utch)
from heischar.connection import ConnectionData
from heischar.cyclic import Chain, connes_B, hochschild_b
from heischar.extension import (PrincipalSymbol, TPolyMatrix, lam_section,
                                iota_lam_section, leading_angle_modes,
                                section_s, symbol_algebra)
from heischar.poly import Poly, rho2
from heischar.scalars import QI
from heischar.torus import Section, SectionAlgebra, SymbolFiber
from heischar.weyl import FormalSymbol, invert_formal, iota, star

D = 3
CUT = 8
X = Poly.var(2, 0)
XI = Poly.var(2, 1)


def pool():
    el = FormalSymbol.from_poly(rho2(2)) + FormalSymbol.unit(1)
    inv = invert_formal(el, cutoff=CUT)
    wbar = FormalSymbol.from_poly(
        (X * X - XI * XI - (X * XI).scale(QI(0, 2))).scale(Fraction(1, 2)))
    winv = invert_formal(wbar, cutoff=CUT)
    return el, inv, wbar, winv, star(wbar, inv), star(winv, el)


EL, INV, WBAR, WINV, AFIB, BFIB = pool()
CTX = CharContext(ConnectionData.abelian(
    D, {(0, (0, 1, 0)): Fraction(1, 2)}), CharConfig(d=D, cutoff=CUT, u_window=2,
                                                     tch_order=10))


def winding_symbol(mode=(0, 0, 1), twist=None):
    a = AFIB if twist is None else star(AFIB, twist)
    wp = [[Section(D, SymbolFiber(1, CUT), {mode: a})]]
    wm = [[Section(D, SymbolFiber(1, CUT, op=True), {mode: iota(a)})]]
    return PrincipalSymbol(wp, wm, d=D, cutoff=CUT)


class TestSection:
    def test_unit_section_constant_path(self):
        plus = symbol_algebra(D, CUT, op=False)
        minus = symbol_algebra(D, CUT, op=True)
        sym = PrincipalSymbol([[plus.unit()]], [[minus.unit()]], d=D, cutoff=CUT)
        e = section_s(sym)
        assert len(e.r.coeffs) == 2
        r1_block = e.r.coeffs[1]
        assert all(s.is_zero() for row in r1_block for s in row)

    def test_endpoints_enforced(self):
        sym = winding_symbol()
        e = section_s(sym)
        e.check_endpoints()

    def test_bad_endpoints_rejected(self):
        sym = winding_symbol()
        e = section_s(sym)
        alg = e.alg_b
        broken = TPolyMatrix(alg, [e.r.coeffs[0],
                                   [[alg.unit()]]])
        from heischar.extension import ExtensionElement
        with pytest.raises(ValueError):
            ExtensionElement(sym.wp, sym.wm, broken, d=D, cutoff=CUT)

    def test_leading_modes(self):
        modes = leading_angle_modes(AFIB)
        assert modes  # winding content present
        s = sum((abs(complex(v)) for v in modes.values()))
        assert s > 0.1

    def test_multiplication_keeps_endpoints(self):
        sym = winding_symbol()
        e = section_s(sym)
        prod = e.mul(e)
        prod.check_endpoints()

    def test_invertible_path_nodes(self):
        sym = winding_symbol()
        e = section_s(sym)
        for t in (0, Fraction(1, 3), Fraction(7, 8), 1):
            mat = e.r.at(t)
            inv = e.alg_b.inv_matrix(mat)


class TestTripleClosure:
    def test_chern_triple_closed(self):
        sym = winding_symbol()
        e = section_s(sym)
        triple = ch_extension(e, L=1, order=10)
        bd = extension_boundary(triple)
        assert bd.class_residual(max_power=1) < 1e-9

    def test_boundary_squared(self):
        rng = random.Random(5)
        fib = SymbolFiber(1, CUT)
        fib_m = SymbolFiber(1, CUT, op=True)
        fib_b = SymbolFiber(1, CUT)
        salg, salg_m, salg_b = (SectionAlgebra(D, f) for f in (fib, fib_m, fib_b))

        def sec(f):
            return Section(D, f, {(0, 0, 1): rng.choice([AFIB, BFIB, INV])})

        def uc(algx, fx, base, powers):
            parts = {}
            for p in powers:
                l = base + 2 * p
                if l < 0:
                    continue
                parts[p] = Chain(algx, l,
                                 [(QI(1), tuple(sec(fx) for _ in range(l + 1)))])
            return UChain(algx, parts)

        t = TripleChain(uc(salg, fib, 1, (0, 1)), uc(salg_m, fib_m, 1, (0, 1)),
                        uc(salg_b, fib_b, 2, (-1, 0)))
        assert extension_boundary(extension_boundary(t)).class_residual() < 1e-12

    def test_gamma_only_boundary(self):
        fib_b = SymbolFiber(1, CUT)
        salg_b = SectionAlgebra(D, fib_b)
        sec = Section(D, fib_b, {(0, 0, 1): INV.drop_model()})
        g = UChain(salg_b, {0: Chain(salg_b, 2, [(QI(1), (sec, sec, sec))])})
        zero = UChain(SectionAlgebra(D, SymbolFiber(1, CUT)), {})
        zero_m = UChain(SectionAlgebra(D, SymbolFiber(1, CUT, op=True)), {})
        bd = extension_boundary(TripleChain(zero, zero_m, g))
        assert bd.zp.is_zero() and bd.zm.is_zero()
        want = g.boundary().scale(-1)
        assert (bd.g - want).class_residual() < 1e-12


class TestCharacterForm:
    def test_unit_symbol_zero(self):
        plus = symbol_algebra(D, CUT, op=False)
        minus = symbol_algebra(D, CUT, op=True)
        sym = PrincipalSymbol([[plus.unit()]], [[minus.unit()]], d=D, cutoff=CUT)
        assert character_form(sym, CTX).is_zero()
        assert index_pairing(sym, CTX) == 0

    def test_chi_closed_and_odd(self):
        sym = winding_symbol()
        chi = character_form(sym, CTX)
        assert all(p % 2 == 1 for p in chi.parts)
        assert chi.ext_d().norm() < 1e-8

    def test_block_additivity_of_ch(self):
        s1 = winding_symbol(mode=(0, 0, 1))
        s2 = winding_symbol(mode=(0, 1, 0))
        chi1 = character_form(s1, CTX)
        chi2 = character_form(s2, CTX)
        chi12 = character_form(s1.block_diag(s2), CTX)
        assert (chi12 - chi1 - chi2).norm() < 1e-9


class TestEvaluationRoutes:
    def test_routes_match(self):
        rng = random.Random(9)
        fib = SymbolFiber(1, 6)
        salg = SectionAlgebra(D, fib)
        small = [s.truncate(6) for s in (AFIB, BFIB, INV)]
        for _ in range(5):
            l = rng.randint(0, 2)
            slots = tuple(Section(D, fib, {(0, 0, 1): rng.choice(small)})
                          for _ in range(l + 1))
            c = Chain(salg, l, [(QI(1), slots)])
            a = char_plus(c, CTX, simplex=False)
            b = char_plus(c, CTX, simplex=True)
            assert (a - b).norm() < 1e-12
