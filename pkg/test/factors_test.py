""" Tests for the interpolation factors, their identities and lambda. """
from fractions import Fraction

import pytest
import sympy

from starkrankin.exceptions import DomainError
from starkrankin.factors import (
    A,
    PI,
    SQRT_D,
    E_c,
    FactorContext,
    beta_theta,
    bdp_fudge,
    christmas,
    critical_range,
    e_BDP,
    e_HR,
    e_K,
    e_hr_general,
    e_katz,
    euler_discrepancy,
    f_BDP,
    f_HR,
    f_hr_general,
    f_infty_value,
    f_katz,
    gamma_index,
    interpolation_weights,
    katz_fudge,
    lambda_breakdown,
    lambda_general,
    lambda_theorem,
    lambda_zero,
    predicted_integral,
    render_value,
    verify_assembly,
    verify_euler_identity,
)
from starkrankin.exactalg import CyclotomicElement
from starkrankin.padic import FormalGroupContext, PadicNumber, elliptic_unit_log, embed_scalar, recover_point
from starkrankin.quadfield import ImagQuadField
from test.test_utils import (  # noqa: F401
    SCENARIO_11A,
    SCENARIO_11A_D7,
    SCENARIO_26A,
    SCENARIO_43A,
    scenario,
    settings,
)


class TestIndices(object):
    """Small arithmetic helpers"""

    def test_gamma_index(self):
        assert gamma_index(1) == 1
        assert gamma_index(4) == 6
        assert gamma_index(11) == 12
        assert gamma_index(77) == 96

    def test_E_c(self):
        assert E_c(ImagQuadField(7), 1) == 1
        assert E_c(ImagQuadField(7), 3) == 2

    def test_interpolation_weights(self):
        assert interpolation_weights(3, 3) == [0, 1, 2]
        assert interpolation_weights(5, 3) == [1, 3, 5]
        assert interpolation_weights(11, 2) == [4, 9]

    def test_critical_range(self):
        assert critical_range(3, 2) == [2]
        assert critical_range(5, 2) == [3, 4]

    def test_katz_general(self):
        """ Katz factors for a general infinity type """
        assert e_katz(1, 0, 5) == sympy.Rational(4, 5)
        assert e_katz(5, 1, 5) == 0
        assert f_katz(1, 0) == 1
        assert sympy.simplify(f_katz(3, 2) - SQRT_D ** 2 / (2 * PI ** 2)) == 0


class TestEulerIdentity(object):
    """e_HR(l) e_K(l) = e_BDP(l)"""

    def test_numeric_ap(self):
        ctx = FactorContext(3, a_p=-1)
        checks = verify_euler_identity(ctx, range(-1, 4))
        assert [c.l for c in checks] == [-1, 0, 1, 2, 3]
        assert all(c.passed for c in checks)

    def test_symbolic_ap(self):
        ctx = FactorContext(5)
        assert ctx.variables == [A, sympy.Symbol("a")]
        assert all(c.passed for c in verify_euler_identity(ctx, range(0, 3)))

    def test_general_specialises(self):
        """k = 2, m = 1 and weight 2l+3 recover e_HR and f_HR"""
        ctx = FactorContext(7, a_p=-2)
        for l in range(0, 3):
            general = e_hr_general(2 * l + 3, 2, 1, beta_theta(ctx, l), ctx.a_p, 7, 7)
            assert sympy.cancel(general.expr - e_HR(ctx, l).expr) == 0
            general = f_hr_general(2 * l + 3, 2, 1, ctx.N)
            assert sympy.simplify(general.expr - f_HR(ctx, l).expr) == 0

    def test_general_rejects(self):
        with pytest.raises(DomainError):
            e_hr_general(4, 2, 1, A, 1, 7, 7)
        with pytest.raises(DomainError):
            f_hr_general(4, 2, 0, 11)


class TestAssembly(object):
    """f_HR f_K / (f_BDP f_Pet) = f_infty"""

    def test_assembly(self):
        ctx = FactorContext(3, a_p=-1, D=7, N=77, n_common=0)
        checks = verify_assembly(ctx, range(-1, 4))
        assert checks[0].passed is None
        assert all(c.passed for c in checks[1:])

    def test_perturbed(self):
        ctx = FactorContext(3, a_p=-1)
        checks = verify_assembly(ctx, range(0, 2), perturbations={"f_Pet": 2})
        assert not any(c.passed for c in checks)
        assert checks[0].to_json()["passed"] is False

    def test_factorial_range(self):
        ctx = FactorContext(3, a_p=-1)
        with pytest.raises(DomainError):
            f_BDP(ctx, -1)
        with pytest.raises(DomainError):
            f_HR(ctx, -1)
        with pytest.raises(DomainError):
            e_HR(ctx, -2)

    def test_evaluate(self):
        ctx = FactorContext(3, a_p=-1)
        assert e_BDP(ctx, -1).evaluate(A=Fraction(1)) == Fraction(25, 9)
        with pytest.raises(DomainError):
            e_K(ctx, 0).evaluate()
        assert "expression" in e_K(ctx, 0).to_json()


class TestFudgeFactors(object):
    """Katz and BDP fudge factors"""

    def test_katz(self):
        assert katz_fudge(None, 3, 1, trivial=True) == Fraction(-1, 3)
        assert katz_fudge(Fraction(1), 5, 1) == 0
        assert katz_fudge(Fraction(-1), 3, 1) == Fraction(-1, 9)

    def test_bdp(self):
        assert bdp_fudge(-1, Fraction(1), Fraction(1), 3) == Fraction(25, 9)


class TestLambda(object):
    """The elliptic Stark constant"""

    def test_class_number_one(self, settings):
        s = scenario(SCENARIO_11A, settings).factors
        parts = lambda_breakdown(s)
        assert parts == {
            "Eul_N(-1)": 1,
            "f_infty(-1)": Fraction(-1, 2),
            "f_p(f,psi)": Fraction(25, 9),
            "f_p(psi^-2)": Fraction(-1, 3),
        }
        assert lambda_general(s) == Fraction(25, 6)
        assert lambda_theorem(s) == Fraction(25, 6)
        assert christmas(s) == Fraction(25, 6)
        assert lambda_zero(s) == Fraction(1, 2)

    def test_rank_one(self, settings):
        s = scenario(SCENARIO_43A, settings).factors
        assert lambda_general(s) == lambda_theorem(s) == christmas(s)

    def test_ring_class_character(self, settings):
        s = scenario(SCENARIO_26A, settings).factors
        assert lambda_general(s) != 0
        with pytest.raises(DomainError):
            lambda_theorem(s)
        with pytest.raises(DomainError):
            christmas(s)

    def test_quadratic_extension(self, settings):
        s = scenario(SCENARIO_11A_D7, settings).factors
        lam = lambda_general(s)
        assert not isinstance(lam, Fraction)
        rendered = render_value(lam, s.p, 10)
        assert rendered["padic"] is None
        assert "padic_note" in rendered

    def test_f_infty(self, settings):
        s = scenario(SCENARIO_11A, settings).factors
        assert f_infty_value(s) == Fraction(-1, 2)
        assert euler_discrepancy(s) == 1
        with pytest.raises(DomainError):
            f_infty_value(s, 0)

    def test_render(self):
        rendered = render_value(Fraction(25, 6), 3, 10)
        assert rendered["exact"] == "25/6"
        assert rendered["padic"].endswith("O(3^10)")


class TestPredictedIntegral(object):
    """lambda log_E(P)^2 / log_p(u)"""

    def test_torsion_point(self, settings):
        s = scenario(SCENARIO_11A, settings)
        ctx = FormalGroupContext(s.E, 3, prec=12)
        u_log = elliptic_unit_log(s.field, 3, 12)
        predicted = predicted_integral(ctx, s.factors, s.heegner_point, u_log)
        assert predicted.torsion
        assert predicted.value.is_zero()

    def test_rank_one(self, settings):
        s = scenario(SCENARIO_43A, settings)
        ctx = FormalGroupContext(s.E, 11, prec=12)
        u_log = elliptic_unit_log(s.field, 11, 12)
        predicted = predicted_integral(ctx, s.factors, s.heegner_point, u_log)
        assert not predicted.torsion
        assert not predicted.value.is_zero()
        assert predicted.to_json()["torsion"] is False
        with pytest.raises(DomainError):
            predicted_integral(ctx, s.factors, s.heegner_point, PadicNumber.zero(11, 12))

    def test_round_trip_with_zeta_residue(self, settings):
        """A cyclotomic lambda embedded through zeta_5 -> 5 survives prediction and recovery"""
        s = scenario(SCENARIO_43A, settings, zeta_residue=5)
        assert s.factors.zeta_residue == 5
        ctx = FormalGroupContext(s.E, 11, prec=12)
        u_log = elliptic_unit_log(s.field, 11, 12)
        lam = CyclotomicElement.zeta(5) + 2
        assert not embed_scalar(lam, 11, 12, 5).agrees_with(embed_scalar(lam, 11, 12), 1)
        predicted = predicted_integral(ctx, s.factors, s.heegner_point, u_log, lam)
        recovered = recover_point(ctx, predicted.value, u_log, lam, zeta_residue=5)
        log_P = predicted.formal.value
        assert recovered.parameter.agrees_with(log_P, 6) or recovered.parameter.agrees_with(-log_P, 6)
