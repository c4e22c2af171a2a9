"""
The verify-factors command: the Euler and assembly identities behind the
factorisation of the Rankin p-adic L-function, weight by weight.
"""

import logging
from fractions import Fraction

import click
import sympy
from sympy import Integer, Rational

from starkrankin.commands import Run, emit, exits_with_error_code, open_scenario, out_option, pass_run, scenario_option
from starkrankin.exceptions import ScenarioError
from starkrankin.factors import (
    A,
    SQRT_D,
    FactorContext,
    beta_theta,
    e_BDP,
    e_HR,
    e_hr_general,
    e_K,
    e_katz,
    f_BDP,
    f_HR,
    f_hr_general,
    f_infty,
    f_infty_value,
    f_K,
    f_katz,
    f_Pet,
    interpolation_weights,
    verify_assembly,
    verify_euler_identity,
)
from starkrankin.utils import ReportBuilder, render

logger = logging.getLogger(__name__)

EULER_ANCHOR = "e_HR(l) e_K(Phi_l) = e_BDP(Psi_l)"
ASSEMBLY_ANCHOR = "f_HR(l) f_K(l) / (f_BDP(l) f_Pet(l)) = f_infty(l)"
PERTURBABLE = ("f_HR", "f_K", "f_BDP", "f_Pet")


def parse_perturbations(values):
    """["f_Pet=2", ...] -> {"f_Pet": Rational(2)}"""
    out = {}
    for item in values:
        name, _, scale = item.partition("=")
        if name not in PERTURBABLE or not scale:
            raise ScenarioError(f"perturbation {item!r} must be one of {PERTURBABLE} = <rational>")
        out[name] = Rational(scale)
    return out


def _vanishes(expr):
    return sympy.cancel(sympy.radsimp(expr)) == 0


def _factor_table(ctx, l):
    row = {}
    for build in (e_HR, e_K, e_BDP, f_K, f_Pet, f_HR, f_BDP, f_infty):
        try:
            row[build.__name__] = build(ctx, l).render()
        except ValueError as e:
            row[build.__name__] = None
            logger.debug(f"{build.__name__} at l = {l}: {e}")
    return row


def add_general_checks(report, ctx, l):
    """
    The (l, k, m) parametrised factors at (2l+3, 2, 1) against e_HR and
    f_HR, and the Katz factors at Phi_l against e_K and f_K.
    """
    p = Integer(ctx.p)
    B = beta_theta(ctx, l)
    weight = 2 * l + 3

    katz = e_katz(B ** 2 / p ** (2 * l + 2), p ** (2 * l + 2) / A ** 2, p)
    report.add_check(f"general.katz_euler.l={l}", "e_Katz(Phi_l) = e_K(l)",
                     _vanishes(katz - e_K(ctx, l).expr), lhs="e_Katz(Phi_l)", rhs="e_K(l)")

    archimedean = f_katz(2 * l + 3, -2 * l - 1)
    report.add_check(f"general.katz_archimedean.l={l}", "f_Katz(2l+3, -2l-1) = f_K(l)",
                     _vanishes(archimedean - f_K(ctx, l).expr), lhs="f_Katz(2l+3,-2l-1)", rhs="f_K(l)")

    if l >= 0:
        general = e_hr_general(weight, 2, 1, B, ctx.a_p, p, p).expr
        report.add_check(f"general.euler.l={l}", "e_HR(2l+3, 2, 1) = e_HR(l)",
                         _vanishes(general - e_HR(ctx, l).expr), lhs="e_HR(2l+3,2,1)", rhs="e_HR(l)")

        sqrt_d = sympy.sqrt(ctx.D)
        lhs = f_hr_general(weight, 2, 1, ctx.N).expr.subs(SQRT_D, sqrt_d)
        rhs = f_HR(ctx, l).expr.subs(SQRT_D, sqrt_d)
        report.add_check(f"general.archimedean.l={l}", "f_HR(2l+3, 2, 1) = f_HR(l)",
                         _vanishes(lhs - rhs), lhs=str(sympy.factor(lhs)), rhs=str(sympy.factor(rhs)))


def build_factor_report(run, scenario, l_min=0, l_max=5, perturbations=None):
    """
    Run both identities over l_min..l_max, the general-parameter
    specialisations and the special values at l = -1.
    """
    if l_min < -1 or l_max < l_min:
        raise ScenarioError(f"l range [{l_min}, {l_max}] must satisfy -1 <= l_min <= l_max")
    settings = run.settings
    factors = scenario.factors
    ctx = FactorContext.from_scenario(factors, symbolic_ap=True)
    l_range = range(l_min, l_max + 1)
    report = ReportBuilder("verify-factors", seed=scenario.seed)

    with report.timed("euler"):
        checks = verify_euler_identity(
            ctx, l_range,
            degree_bound=settings["EULER_DEGREE_BOUND"],
            seed=scenario.seed,
            retries=settings["RESAMPLE_RETRIES"],
        )
        for check in checks:
            report.add_check(f"euler.l={check.l}", EULER_ANCHOR, check.passed, check.lhs, check.rhs,
                             sampled_variables=[str(v) for v in ctx.variables])

    with report.timed("assembly"):
        for check in verify_assembly(ctx, l_range, perturbations):
            if check.passed is None:
                report.add_skipped(f"assembly.l={check.l}", ASSEMBLY_ANCHOR, check.detail)
            else:
                report.add_check(f"assembly.l={check.l}", ASSEMBLY_ANCHOR, check.passed,
                                 str(check.lhs), str(check.rhs))

    with report.timed("general"):
        for l in l_range:
            add_general_checks(report, ctx, l)

    report.add_section("factors", {str(l): _factor_table(ctx, l) for l in l_range})
    report.add_section("interpolation_weights", interpolation_weights(factors.p, 5))

    with report.timed("special_values"):
        value = f_infty_value(factors)
        special = {
            "f_infty(-1)": render(value),
            "h_K": factors.h_K,
            "g_K": factors.g_K,
            "N": factors.N,
            "psi(N)": render(factors.psi_N),
        }
        report.add_section("special_values", special)
        anchor = "f_infty(-1) = -1/(2 h_K g_K) when D_K = N_E and c = 1"
        if factors.theorem_applies:
            expected = Fraction(-1, 2 * factors.h_K * factors.g_K)
            report.add_check("special.f_infty", anchor, value == expected, value, expected)
        else:
            report.add_skipped("special.f_infty", anchor, "needs D_K = N_E and c = 1")
    return report


@click.command("verify-factors")
@scenario_option
@click.option("--l-min", "l_min", type=int, default=0, show_default=True)
@click.option("--l-max", "l_max", type=int, default=5, show_default=True)
@click.option("--perturb", "perturb", multiple=True, hidden=True,
              help="Scale one f-factor, e.g. f_Pet=2 (negative control).")
@out_option
@pass_run
@exits_with_error_code
def verify_factors_command(run: Run, scenario_path, l_min, l_max, perturb, out_path):
    """
    Check the Euler and assembly identities for l in [l_min, l_max].

    Usage: starkrankin verify-factors --scenario scenario.json --l-min 0 --l-max 5
    """
    scenario = open_scenario(run, scenario_path)
    report = build_factor_report(run, scenario, l_min, l_max, parse_perturbations(perturb))
    report.add_scenario_echo(scenario)
    emit(run, report, out_path)
