"""Cyclic complex, Chern character, transgression."""

import random
from fractions import Fraction

import pytest

from heischar.cyclic import (Chain, InvertiblePath, MatrixAlgebra, NumberAlgebra,
                             PerChain, chern, connes_B, hochschild_b,
                             mat_identity, mat_scale, per_boundary, tch)
from heischar.scalars import QI

ALG = MatrixAlgebra(2)
RNG = random.Random(23)


def relem():
    return ALG.element([[Fraction(RNG.randint(-3, 3), 2) for _ in range(2)]
                        for _ in range(2)])


def rchain(l, nterms=2):
    return Chain(ALG, l, [(QI(RNG.randint(-2, 2)),
                           tuple(relem() for _ in range(l + 1)))
                          for _ in range(nterms)])


class TestDifferentials:
    @pytest.mark.parametrize("l", [0, 1, 2, 3, 4])
    def test_b_squared(self, l):
        for _ in range(6):
            assert hochschild_b(hochschild_b(rchain(l))).class_residual() == 0

    @pytest.mark.parametrize("l", [0, 1, 2, 3])
    def test_B_squared(self, l):
        for _ in range(6):
            assert connes_B(connes_B(rchain(l))).class_residual() == 0

    @pytest.mark.parametrize("l", [0, 1, 2, 3])
    def test_anticommute(self, l):
        for _ in range(6):
            c = rchain(l)
            s = hochschild_b(connes_B(c)) + connes_B(hochschild_b(c))
            assert s.class_residual() == 0

    def test_b_formula_degree_one(self):
        a0, a1 = relem(), relem()
        got = hochschild_b(Chain(ALG, 1, [(QI(1), (a0, a1))]))
        want = Chain(ALG, 0, [(QI(1), (ALG.mul(a0, a1),)),
                              (QI(-1), (ALG.mul(a1, a0),))])
        assert (got - want).class_residual() == 0

    def test_B_formula_degree_zero(self):
        a0 = relem()
        got = connes_B(Chain(ALG, 0, [(QI(1), (a0,))]))
        want = Chain(ALG, 1, [(QI(1), (ALG.unit(), a0))])
        assert (got - want).class_residual() == 0

    def test_normalization_idempotent(self):
        c = rchain(2)
        again = Chain(ALG, 2, c.terms)
        assert (c - again).class_residual() == 0


class TestPerChain:
    def test_boundary_squared(self):
        for parity in (0, 1):
            comps = {m: rchain(parity + 2 * m, 1) for m in range(3)}
            z = PerChain(ALG, parity, 3, comps)
            assert per_boundary(per_boundary(z)).class_residual() == 0

    def test_truncation_flag(self):
        L = 1
        z = PerChain(ALG, 1, L, {1: rchain(3, 1)})
        bd = per_boundary(z)
        assert "truncation_loss" in bd.flags


class TestChern:
    def test_identity_vanishes(self):
        assert chern(ALG, [[ALG.unit()]], 2).is_zero()

    def test_scalar_multiple(self):
        ch = chern(ALG, [[ALG.scale(ALG.unit(), QI(5))]], 2)
        assert set(ch.comps) <= {0}

    def test_closed_up_to_truncation(self):
        r = [[ALG.element([[2, 1], [1, 1]])]]
        bd = per_boundary(chern(ALG, r, 3))
        for m in range(3):
            assert bd.component(m).class_residual() < 1e-12


class TestTransgression:
    def test_constant_path(self):
        r = [[ALG.element([[2, 1], [1, 1]])]]

        def rt(t):
            return r

        def drt(t):
            return [[ALG.zero()]]

        T = tch(InvertiblePath(ALG, rt, drt, 1), 2, order=8)
        assert T.norm() < 1e-14

    def test_interpolation(self):
        r1 = ALG.element([[2, 1], [1, 1]])
        r0 = ALG.unit()

        def rt(t):
            tt = QI(Fraction(t))
            return [[ALG.add(ALG.scale(r0, QI(1) - tt), ALG.scale(r1, tt))]]

        def drt(t):
            return [[ALG.add(r1, ALG.neg(r0))]]

        path = InvertiblePath(ALG, rt, drt, 1)
        L = 3
        lhs = chern(ALG, [[r1]], L) - chern(ALG, [[r0]], L)
        res16 = (lhs - per_boundary(tch(path, L, order=16))).class_residual(
            max_level=L - 1)
        res4 = (lhs - per_boundary(tch(path, L, order=4))).class_residual(
            max_level=L - 1)
        assert res16 < 1e-8
        assert res16 < res4
