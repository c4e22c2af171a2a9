""" Tests for Hecke roots, local Rankin factors, bad Euler ratios and partial sums. """
from fractions import Fraction

import mpmath
import pytest

from starkrankin.elliptic import WeierstrassModel
from starkrankin.exactalg import CyclotomicElement, RootExtensionElement
from starkrankin.exceptions import DomainError
from starkrankin.heckechar import RingClassCharacter
from starkrankin.lfun import (
    HeckeRoots,
    LocalFactor,
    dirichlet_partial_sum,
    euler_ratio_bad,
    euler_ratio_hr,
    euler_ratio_pet,
    f_roots,
    g_roots,
    hecke_partial_sum,
    hecke_roots,
    label_roots,
    prime_power_coefficients,
    rankin_local_factor,
)
from starkrankin.quadfield import ImagQuadField
from test.test_utils import SCENARIO_11A, SCENARIO_11A_D7, SCENARIO_26A, scenario, settings  # noqa: F401

CURVE_11A = WeierstrassModel.from_list([0, -1, 1, -10, -20], conductor=11)


class TestHeckeRoots(object):
    """Roots of X^2 - a_q X + chi(q) q^(k-1) and their labelling"""

    def test_rational_roots(self):
        roots = hecke_roots(3, 1, 2, 2)
        assert (roots.alpha, roots.beta) == (1, 2)
        assert roots.a_q == 3
        assert not roots.bad

    def test_bad_prime(self):
        roots = hecke_roots(1, 0, 11, 2, bad=True)
        assert roots.bad
        assert (roots.alpha, roots.beta) == (1, 0)

    def test_weight_one(self):
        inert = hecke_roots(0, -1, 5, 1)
        assert (inert.alpha, inert.beta) == (1, -1)
        cubic = hecke_roots(-1, 1, 2, 1)
        assert isinstance(cubic.alpha, CyclotomicElement)
        assert cubic.alpha ** 3 == 1
        assert cubic.alpha + cubic.beta == -1
        assert cubic.alpha != cubic.beta

    def test_adjoined_root(self):
        roots = hecke_roots(-1, 1, 3, 2)
        assert isinstance(roots.alpha, RootExtensionElement)
        assert roots.labelling == "upper root"
        assert roots.alpha + roots.beta == -1
        assert roots.alpha * roots.beta == 3
        assert roots.alpha.to_complex(64).imag > 0

    def test_labelling(self):
        roots = label_roots(5, Fraction(5), Fraction(1))
        assert (roots.alpha, roots.beta) == (1, 5)
        roots = label_roots(7, Fraction(-1), Fraction(1))
        assert (roots.alpha, roots.beta) == (1, -1)
        assert roots.to_json() == {"q": 7, "alpha": "1", "beta": "-1", "labelling": "valuation"}


class TestLocalFactors(object):
    """Rankin local factors and prime power coefficients"""

    def test_rankin_product(self):
        g = label_roots(5, Fraction(1), Fraction(-1))
        f = HeckeRoots(5, Fraction(2), Fraction(3))
        factor = rankin_local_factor(g, f)
        assert factor.degree == 4
        assert factor.coeffs == [1, 0, -13, 0, 36]
        assert factor.evaluate(Fraction(1)) == 24
        assert factor.series(2) == [1, 0, 13]

    def test_bad_root_drops_out(self):
        g = HeckeRoots(5, Fraction(1), Fraction(0), labelling="bad")
        factor = rankin_local_factor(g, HeckeRoots(5, Fraction(2), Fraction(3)))
        assert factor.coeffs == [1, -5, 6]

    def test_mismatched_primes(self):
        with pytest.raises(DomainError):
            rankin_local_factor(HeckeRoots(5, Fraction(1), Fraction(1)), HeckeRoots(7, Fraction(1), Fraction(1)))
        with pytest.raises(DomainError):
            LocalFactor(5, [Fraction(2), Fraction(1)])

    def test_prime_powers(self):
        roots = HeckeRoots(2, Fraction(1), Fraction(2))
        assert prime_power_coefficients(roots, 3) == [1, 3, 7, 15]
        assert LocalFactor(2, [Fraction(1), Fraction(-3), Fraction(2)]).series(3) == [1, 3, 7, 15]


class TestFormRoots(object):
    """Roots of the newform of E and of the theta series of psi"""

    def test_f_roots(self):
        bad = f_roots(CURVE_11A, 11)
        assert bad.bad
        assert bad.alpha == 1
        good = f_roots(CURVE_11A, 3)
        assert good.alpha + good.beta == -1
        assert good.alpha * good.beta == 3

    def test_g_roots(self):
        psi = RingClassCharacter.trivial(ImagQuadField(11))
        split = g_roots(psi, 3)
        assert (split.alpha, split.beta) == (1, 1)
        inert = g_roots(psi, 2)
        assert (inert.alpha, inert.beta) == (1, -1)
        assert inert.a_q == 0
        assert g_roots(psi, 11).bad

    def test_family_roots(self):
        psi = RingClassCharacter.trivial(ImagQuadField(11))
        split = g_roots(psi, 3, l=0)
        assert split.alpha * split.beta == 9
        assert split.alpha + split.beta == -5
        inert = g_roots(psi, 2, l=0)
        assert (inert.alpha, inert.beta) == (2, -2)

    def test_conductor_prime(self):
        psi = RingClassCharacter(ImagQuadField(7), 3, None)
        roots = g_roots(psi, 3)
        assert (roots.alpha, roots.beta) == (0, 0)


class TestEulerRatios(object):
    """Bad Euler factor ratios at q | N"""

    def test_common_prime(self, settings):
        s = scenario(SCENARIO_11A, settings)
        ratio = euler_ratio_bad(s)
        assert ratio.value == 1
        assert ratio.nonvanishing
        assert [f.kind for f in ratio.factors] == ["N_E and D_K"]
        assert euler_ratio_bad(s, literal=True).value == Fraction(6, 5)
        assert ratio.to_json()["value"] == "1"

    def test_quadratic_extension(self, settings):
        """Over Q(sqrt(-7)) the ratio is (90 + 10 rho)/77 with rho^2 = -2 rho - 7"""
        s = scenario(SCENARIO_11A_D7, settings)
        ratio = euler_ratio_bad(s)
        assert [f.q for f in ratio.factors] == [7, 11]
        assert [f.kind for f in ratio.factors] == ["D_K c^2 only", "N_E only"]
        assert ratio.factors[0].numerator == Fraction(10, 7)
        assert ratio.factors[1].denominator == Fraction(10, 11)
        rho = 7 * (1 - ratio.factors[0].denominator)
        assert rho * rho == -2 * rho - 7
        assert ratio.value == (90 + 10 * rho) / 77

    @pytest.mark.parametrize("l", [-1, 0, 1])
    def test_hr_ratio(self, settings, l):
        s = scenario(SCENARIO_11A, settings)
        assert euler_ratio_hr(s, l).value == 1

    def test_hr_negative_weight(self, settings):
        with pytest.raises(DomainError):
            euler_ratio_hr(scenario(SCENARIO_11A, settings), -2)

    def test_pet_ratio(self, settings):
        ratio = euler_ratio_pet(scenario(SCENARIO_11A, settings), 0)
        assert ratio.value == 1
        assert [f.kind for f in ratio.factors] == ["level of g"]
        assert not ratio.reconstructed

    @pytest.mark.parametrize("l, expected", [(-1, Fraction(25, 33)), (0, Fraction(129, 121))])
    def test_pet_ratio_oldform(self, settings, l, expected):
        """ N = 77 > D = 7: the local ratio at 11 is (1 - alpha^2 X)(1 - beta^2 X) / (1 + 1/11) """
        ratio = euler_ratio_pet(scenario(SCENARIO_11A_D7, settings), l)
        assert ratio.value == expected
        assert ratio.reconstructed
        assert [(f.q, f.kind) for f in ratio.factors] == [(7, "level of g"), (11, "oldform at q")]

    def test_pet_ratio_ring_class(self, settings):
        ratio = euler_ratio_pet(scenario(SCENARIO_26A, settings), -1)
        local = {f.q: f.numerator / f.denominator for f in ratio.factors}
        assert local[2] == Fraction(7, 6)
        assert local[13] == Fraction(183, 182)
        assert local[23] == 1
        assert ratio.value == Fraction(61, 52)
        with pytest.raises(DomainError):
            euler_ratio_pet(scenario(SCENARIO_26A, settings), -2)


class TestPartialSums(object):
    """Truncated Dirichlet series"""

    def test_zeta_two(self):
        coeffs = [Fraction(0)] + [Fraction(1)] * 1000
        partial = dirichlet_partial_sum(coeffs, 2)
        assert partial.terms == 1000
        assert abs(partial.value.real - mpmath.pi ** 2 / 6) <= partial.tail
        with pytest.raises(DomainError):
            dirichlet_partial_sum(coeffs, 1)

    def test_gaussian_field(self):
        """L(1_K, s) = zeta(s) L(chi_-4, s) for K = Q(i)"""
        psi = RingClassCharacter.trivial(ImagQuadField(4))
        partial = hecke_partial_sum(psi, 2, 400, precision_bits=64)
        assert abs(partial.value.real - mpmath.zeta(2) * mpmath.catalan) < 0.01
