""" Tests for q-expansions, their operators and Eisenstein series. """
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies

from starkrankin.exactalg import CyclotomicElement, DirichletCharacter
from starkrankin.exceptions import DomainError, TruncationError
from starkrankin.heckechar import RingClassCharacter
from starkrankin.qexp import (
    QExpansion,
    breve,
    deplete,
    eisenstein_normalisation,
    eisenstein_series,
    from_coefficients,
    hecke_eigen_check,
    hecke_Tl,
    product,
    render_coefficient,
    serre_d,
    serre_d_inverse,
    sigma_chi,
    stabilize,
    u_operator,
    v_operator,
)
from starkrankin.quadfield import ImagQuadField
from starkrankin.theta import theta_series

coefficient_lists = strategies.lists(
    strategies.fractions(min_value=-50, max_value=50, max_denominator=5), min_size=31, max_size=60)


@pytest.fixture
def e4():
    yield eisenstein_series(4, DirichletCharacter.trivial(1), Q=40, min_truncation=0)


class TestQExpansion(object):
    """The truncated series container"""

    def test_truncation(self):
        f = from_coefficients(Fraction, 40)
        assert f.truncation == 40
        assert f[7] == 7
        with pytest.raises(TruncationError):
            f[41]
        with pytest.raises(TruncationError):
            f.truncate(50)
        assert f.truncate(35).truncation == 35
        with pytest.raises(TruncationError):
            u_operator(f, 3)
        with pytest.raises(TruncationError):
            QExpansion([Fraction(1)] * 10)
        assert QExpansion([Fraction(1)] * 10, min_truncation=0).truncation == 9

    def test_immutable(self):
        f = from_coefficients(Fraction, 40)
        with pytest.raises(AttributeError):
            f.weight = 3

    def test_arithmetic(self):
        f = from_coefficients(Fraction, 40)
        g = from_coefficients(lambda n: Fraction(1), 35)
        total = f + g
        assert total.truncation == 35
        assert total[3] == 4
        assert (f - f).is_zero()
        assert (2 * f)[5] == 10
        assert (-f)[5] == -5

    def test_render(self):
        assert render_coefficient(Fraction(1, 2)) == "1/2"
        assert render_coefficient(CyclotomicElement.rational(3, 5)) == "3"
        assert render_coefficient(CyclotomicElement.zeta(3)) == {"order": 3, "coeffs": ["0", "1"]}


class TestOperators(object):
    """d, U_p, V_p, depletion, stabilisation and oldform combinations"""

    def test_serre_d(self):
        f = from_coefficients(lambda n: Fraction(1), 40, weight=2)
        df = serre_d(f)
        assert df.weight == 4
        assert df[0] == 0
        assert df[9] == 9
        back = serre_d_inverse(df)
        assert back.weight == 2
        assert back.coeffs[1:] == f.coeffs[1:]
        with pytest.raises(DomainError):
            serre_d_inverse(f)
        with pytest.raises(DomainError):
            serre_d_inverse(serre_d(f), p=3)
        assert serre_d_inverse(deplete(serre_d(f), 3), p=3)[4] == 1

    def test_u_v(self):
        f = from_coefficients(Fraction, 40, level=11, min_truncation=0)
        assert u_operator(f, 3)[4] == 12
        assert u_operator(f, 3).truncation == 13
        g = v_operator(f, 2)
        assert g.truncation == 80
        assert g.level == 22
        assert g[6] == 3
        assert g[7] == 0

    @settings(derandomize=True, deadline=None, max_examples=30)
    @given(coefficient_lists, strategies.sampled_from([2, 3, 5]))
    def test_u_after_v(self, coeffs, p):
        f = QExpansion(coeffs, min_truncation=0)
        assert u_operator(v_operator(f, p), p) == f
        depleted = deplete(f, p)
        assert all(depleted[n] == 0 for n in range(0, f.truncation + 1, p))
        assert (depleted + v_operator(u_operator(f, p), p, cap=f.truncation)).agrees_with(f)

    def test_breve(self):
        f = from_coefficients(lambda n: Fraction(1), 40)
        g = breve(f, {1: Fraction(1), 2: Fraction(-3)})
        assert g[1] == 1
        assert g[2] == -2
        assert g[0] == -2
        with pytest.raises(DomainError):
            breve(f, {})

    def test_stabilize(self, e4):
        """The roots of X^2 - sigma_3(2) X + 8 are 1 and 8"""
        for alpha, beta in ((1, 8), (8, 1)):
            g = stabilize(e4, Fraction(alpha), Fraction(beta), 2)
            assert g.level == 2
            assert u_operator(g, 2).agrees_with(g.scale(alpha))
        with pytest.raises(DomainError):
            stabilize(e4, Fraction(2), Fraction(7), 2)
        with pytest.raises(DomainError):
            stabilize(e4, Fraction(1), Fraction(7), 2)


class TestHecke(object):
    """Hecke operators on Eisenstein series and theta series"""

    def test_eisenstein_eigenform(self, e4):
        assert e4[0] == Fraction(1, 240)
        assert e4[2] == 9
        for l in (2, 3, 5, 7):
            assert hecke_eigen_check(e4, l)
        assert hecke_Tl(e4, 2).truncation == 20
        with pytest.raises(DomainError):
            hecke_Tl(e4, 4)

    def test_not_eigenform(self):
        f = from_coefficients(lambda n: Fraction(n * n + 1) if n else Fraction(0), 40, weight=2, level=1,
                              min_truncation=0)
        f = f.derive([Fraction(0), Fraction(1)] + list(f.coeffs[2:]))
        assert not hecke_eigen_check(f, 2)

    def test_product(self, e4):
        """E_4^2 = E_8 with a_0 = -B_k/(2k)"""
        e8 = eisenstein_series(8, DirichletCharacter.trivial(1), Q=40)
        square = product(e4, e4)
        assert square.weight == 8
        assert square == e8.scale(Fraction(1, 120))
        assert e4 * e4 == square


class TestEisenstein(object):
    """E_{k,chi} and its normalisation"""

    def test_weight_one(self):
        chi = DirichletCharacter.kronecker(-7)
        e1 = eisenstein_series(1, chi, Q=40)
        assert e1[0] == Fraction(1, 2)
        assert e1[2] == 2
        assert e1[3] == 0
        theta = theta_series(RingClassCharacter.trivial(ImagQuadField(7)), Q=40)
        assert e1.agrees_with(theta.expansion)

    def test_old_level(self):
        chi = DirichletCharacter.kronecker(-7)
        e1 = eisenstein_series(1, chi, N=14, Q=40)
        assert e1[0] == 0
        assert e1[2] == 1
        assert e1.level == 14
        with pytest.raises(DomainError):
            eisenstein_series(1, chi, N=10)

    def test_parity(self):
        with pytest.raises(DomainError):
            eisenstein_series(2, DirichletCharacter.kronecker(-7))
        with pytest.raises(DomainError):
            eisenstein_series(0, DirichletCharacter.trivial(1))

    def test_sigma(self):
        assert sigma_chi(6, 2, DirichletCharacter.trivial(1), 1) == 12
        assert sigma_chi(9, 1, DirichletCharacter.kronecker(-7), 7) == 1

    def test_normalisation(self):
        value = eisenstein_normalisation(1, DirichletCharacter.kronecker(-7))
        assert sympy.simplify(value - sympy.sqrt(7) / (4 * sympy.pi)) == 0
        cubic = DirichletCharacter.from_generators(7, [3], [2], 3)
        assert eisenstein_normalisation(2, cubic).has(sympy.Symbol("tau"))
