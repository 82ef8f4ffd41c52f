"""Star-product core: spec'd examples first, randomized laws after."""

import random
from fractions import Fraction

import pytest

from heischar.homog import HomogRat
from heischar.poly import Poly, rho2
from heischar.scalars import QI
from heischar.weyl import (FormalSymbol, MatrixSymbol, NotInSp, NotInvertible,
                           NotSymplectic, QuadraticElement, act_symplectic,
                           bk_bidiff, commutator, delta, invert_formal, iota,
                           mu, mu_inv, star)

X = Poly.var(2, 0)
XI = Poly.var(2, 1)


def sym(p, cutoff=None):
    return FormalSymbol.from_poly(p, cutoff)


class TestBidifferential:
    def test_order_zero_is_pointwise(self):
        f = HomogRat(X * X)
        g = HomogRat(XI * XI + X * X)
        assert bk_bidiff(f, g, 0) == f * g

    def test_ccr_term(self):
        v = bk_bidiff(HomogRat(X), HomogRat(XI), 1)
        assert v == HomogRat(Poly.constant(2, QI(0, Fraction(1, 2))))

    def test_parity(self):
        rng = random.Random(5)
        for _ in range(25):
            f = HomogRat(Poly(2, {(2, 0): QI(rng.randint(-3, 3)),
                                  (0, 2): QI(rng.randint(-3, 3), 1)}))
            g = HomogRat(Poly(2, {(1, 1): QI(rng.randint(-3, 3))}), rho2(2))
            for k in range(4):
                assert bk_bidiff(f, g, k) == bk_bidiff(g, f, k).scale((-1) ** k)


class TestStar:
    def test_unit(self):
        a = sym(X * X + rho2(2))
        assert star(FormalSymbol.unit(1), a) == a
        assert star(a, FormalSymbol.unit(1)) == a

    def test_ccr(self):
        assert commutator(sym(X), sym(XI)) == sym(Poly.constant(2, QI(0, 1)))

    def test_quadratic_commutator(self):
        got = commutator(sym(X * X), sym(XI * XI))
        assert got == sym((X * XI).scale(QI(0, 4)))

    def test_full_product_x2_xi2(self):
        got = star(sym(X * X), sym(XI * XI))
        want = sym(X * X * XI * XI + (X * XI).scale(QI(0, 2))
                   - Poly.constant(2, Fraction(1, 2)))
        assert got == want

    def test_degree_bookkeeping(self):
        a = sym(rho2(2), cutoff=10)
        b = invert_formal(a)
        prod = star(a, b)
        for d in prod.comps:
            assert d == 0

    def test_associativity_randomized(self):
        rng = random.Random(11)
        for _ in range(20):
            comps = {}
            for dg in rng.sample([-4, -2, 0, 2], k=2):
                extra = max(0, -dg // 2)
                num_deg = dg + 2 * extra
                num = Poly(2, {(num_deg, 0): QI(rng.randint(-2, 2), rng.randint(-1, 1)),
                               (0, num_deg): QI(rng.randint(-2, 2))})
                if num.is_zero():
                    continue
                comps[dg] = HomogRat(num, rho2(2) ** extra)
            a = FormalSymbol(1, comps, 8)
            b = sym(X * XI + rho2(2).scale(2))
            c = sym(X * X - XI * XI)
            assert star(star(a, b), c) == star(a, star(b, c))


class TestInvolution:
    def test_unit_fixed(self):
        assert iota(FormalSymbol.unit(1)) == FormalSymbol.unit(1)

    def test_degree_minus_two_flips(self):
        h = HomogRat(Poly.constant(2, 1), rho2(2))
        a = FormalSymbol.from_component(h)
        assert iota(a) == FormalSymbol.from_component(-h)

    def test_involution(self):
        a = sym(X * X + rho2(2).scale(3), cutoff=8)
        assert iota(iota(a)) == a

    def test_anti_automorphism(self):
        rng = random.Random(3)
        for _ in range(10):
            a = sym(X ** 2 * XI ** 2 + rho2(2).scale(rng.randint(1, 4)), cutoff=8)
            b = invert_formal(sym(rho2(2)) + FormalSymbol.unit(1), cutoff=8)
            assert iota(star(a, b)) == star(iota(b), iota(a))

    def test_rejects_odd(self):
        with pytest.raises(Exception):
            iota(sym(X))


class TestLogDerivation:
    def test_kills_constants(self):
        assert delta(FormalSymbol.unit(1)).is_zero()

    def test_kills_radial(self):
        assert delta(sym(rho2(2))).is_zero()
        assert delta(sym(rho2(2) ** 2)).is_zero()

    def test_xi_squared(self):
        want = FormalSymbol.from_component(
            HomogRat((X * XI).scale(QI(0, -4)), rho2(2)))
        assert delta(sym(XI * XI)) == want

    def test_leibniz(self):
        rng = random.Random(7)
        for _ in range(10):
            a = sym(X * X + Poly.constant(2, rng.randint(1, 3)), cutoff=8)
            b = sym(X * XI, cutoff=8)
            assert delta(star(a, b)) == star(delta(a), b) + star(a, delta(b))


class TestInverse:
    def test_unit(self):
        assert invert_formal(FormalSymbol.unit(1, 8)) == FormalSymbol.unit(1)

    def test_scalar(self):
        five = FormalSymbol.unit(1, 8).scale(5)
        assert invert_formal(five) == FormalSymbol.unit(1).scale(Fraction(1, 5))

    def test_two_sided_on_elliptic(self):
        a = sym(rho2(2)) + FormalSymbol.unit(1).scale(2)
        ai = invert_formal(a, cutoff=10)
        assert star(ai, a) == FormalSymbol.unit(1)
        assert star(a, ai) == FormalSymbol.unit(1)

    def test_harmonic_inverse_depth(self):
        b = invert_formal(sym(rho2(2)), cutoff=8)
        assert b.component(-6) == HomogRat(Poly.constant(2, 1), rho2(2) ** 3)

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            invert_formal(sym(X * XI), cutoff=6)  # vanishes on the axes


class TestSymplecticAction:
    def test_identity(self):
        a = sym(X * X + rho2(2))
        assert act_symplectic([[1, 0], [0, 1]], a) == a

    def test_rotation_swap(self):
        got = act_symplectic([[0, -1], [1, 0]], sym(X))
        assert got == sym(XI)

    def test_automorphism(self):
        g = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
        a = sym(X * X)
        b = sym(XI * XI + X * XI)
        assert act_symplectic(g, star(a, b)) == star(act_symplectic(g, a),
                                                     act_symplectic(g, b))

    def test_rejects_non_symplectic(self):
        with pytest.raises(NotSymplectic):
            act_symplectic([[2, 0], [0, 1]], sym(X))


class TestLieIsomorphism:
    def test_rotation_generator(self):
        q = QuadraticElement(rho2(2).scale(Fraction(1, 2)))
        assert mu(q) == [[0, -1], [1, 0]]

    def test_zero(self):
        assert mu(QuadraticElement(Poly(2))) == [[0, 0], [0, 0]]

    def test_round_trip(self):
        rng = random.Random(13)
        for _ in range(10):
            q = QuadraticElement(Poly(2, {
                (2, 0): QI(Fraction(rng.randint(-4, 4), 2)),
                (1, 1): QI(rng.randint(-3, 3)),
                (0, 2): QI(Fraction(rng.randint(-4, 4), 3))}))
            assert mu_inv(mu(q)) == q

    def test_morphism_on_basis(self):
        basis = [QuadraticElement(Poly.monomial((2, 0))),
                 QuadraticElement(Poly.monomial((1, 1))),
                 QuadraticElement(Poly.monomial((0, 2)))]
        for qa in basis:
            for qb in basis:
                xa, xb = qa.as_symbol(), qb.as_symbol()
                bracket = commutator(xa, xb)
                m = bracket.scalar_part()
                quad = bracket.component(2)
                qc = QuadraticElement(quad.num.scale(QI(0, -1))
                                      if not quad.is_zero() else Poly(2))
                A, B = mu(qa), mu(qb)
                comm = [[sum(A[i][t] * B[t][j] - B[i][t] * A[t][j]
                             for t in range(2)) for j in range(2)]
                        for i in range(2)]
                assert mu(qc) == comm

    def test_rejects_non_hamiltonian(self):
        with pytest.raises(NotInSp):
            mu_inv([[1, 0], [0, 1]])


class TestMatrixSymbol:
    def test_star_invert_two_by_two(self):
        one = FormalSymbol.unit(1, 8)
        zero = FormalSymbol.zero(1, 8)
        a = sym(rho2(2), 8) + one.scale(2)
        m = MatrixSymbol([[a, one], [zero, one.scale(3)]])
        minv = m.star_invert(cutoff=8)
        assert m.star(minv) == MatrixSymbol.identity(2, 1, 8)
        assert minv.star(m) == MatrixSymbol.identity(2, 1, 8)

    def test_trace(self):
        one = FormalSymbol.unit(1)
        m = MatrixSymbol([[one, one], [one, one.scale(4)]])
        assert m.trace() == one.scale(5)
