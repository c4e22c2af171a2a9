"""
Commands for class groups, theta series and Eisenstein series.
"""

import logging
from fractions import Fraction

import click
import sympy

from starkrankin.commands import Run, emit, exits_with_error_code, open_scenario, out_option, pass_run, scenario_option
from starkrankin.exactalg import DirichletCharacter
from starkrankin.exceptions import ScenarioError
from starkrankin.heckechar import RingClassCharacter
from starkrankin.qexp import eisenstein_normalisation, eisenstein_series, render_coefficient
from starkrankin.quadfield import ImagQuadField, class_group, is_fundamental_discriminant, reduced_forms
from starkrankin.theta import family_eigenvalue_check, theta_series, verify_eigenform
from starkrankin.utils import ReportBuilder

logger = logging.getLogger(__name__)

EIGENFORM_PRIMES = 20
FAMILY_WEIGHTS = (0, 1)


def _field(D):
    D = abs(D)
    if not is_fundamental_discriminant(-D):
        raise ScenarioError(f"-{D} is not a fundamental discriminant")
    return ImagQuadField(D)


def add_eigenform_checks(report, name, series, level, anchor):
    primes = [l for l in sympy.primerange(2, EIGENFORM_PRIMES + 1) if level % l]
    for l, check in sorted(verify_eigenform(series, primes).items()):
        report.add_check(
            f"{name}.eigenform.T{l:02d}", anchor, check.passed,
            lhs=f"T_{l} f", rhs=f"a_{l} f",
            eigenvalue=render_coefficient(check.eigenvalue),
            checked_upto=check.checked_upto,
            first_failure=check.first_failure,
        )


def build_classgroup_report(run, D, c=1):
    """
    Class group of the order of conductor c in Q(sqrt(-D)) and the
    genus identity.
    """
    field = _field(D)
    disc = field.disc * c * c
    group = class_group(disc, run.settings["CLASS_GROUP_BOUND"])
    report = ReportBuilder("classgroup", seed=run.effective_seed)

    with report.timed("classgroup"):
        forms = reduced_forms(disc)
        report.add_section("class_group", {
            "D_K": field.D,
            "c": c,
            "disc": disc,
            "h": group.h,
            "w": field.w,
            "orders": list(group.orders),
            "generators": [list(g) for g in group.generators],
            "forms": [list(f) for f in forms],
            "genus_number": group.genus_number,
        })
        orders = 1
        for d in group.orders:
            orders *= d
        report.add_check("classgroup.orders", "h = product of the cyclic orders", orders == group.h,
                         lhs=orders, rhs=group.h)
        report.add_check("classgroup.reduced_forms", "h = number of reduced primitive forms",
                         len(forms) == group.h, lhs=len(forms), rhs=group.h)
        if c == 1:
            expected = 2 ** (len(field.prime_divisors()) - 1)
            report.add_check("classgroup.genus", "g_K = [Cl_K : Cl_K^2] = 2^(#{q | D_K} - 1)",
                             group.genus_number == expected, lhs=group.genus_number, rhs=expected)
        else:
            report.add_skipped("classgroup.genus", "g_K = [Cl_K : Cl_K^2] = 2^(#{q | D_K} - 1)",
                               "genus count is stated for the maximal order")
    logger.info(f"class group of {disc}: h = {group.h}")
    return report


def build_theta_report(run, scenario, Q=None):
    """
    theta_psi for the scenario's character, its Hecke eigenform checks and
    the CM family eigenvalue relation at p when h_K = 1.
    """
    Q = scenario.precision.q_truncation if Q is None else Q
    psi = scenario.psi
    field = scenario.field
    report = ReportBuilder("theta", seed=scenario.seed)

    with report.timed("theta"):
        theta = theta_series(psi, Q, min_truncation=run.settings["MIN_TRUNCATION"])
        report.add_section("theta", theta.to_json())
        if psi.is_trivial() and psi.c == 1:
            expected = Fraction(field.class_number, field.w)
            report.add_check("theta.constant_term", "a_0(theta_1) = h_K / w_K", theta[0] == expected,
                             lhs=theta[0], rhs=expected)
        else:
            report.add_skipped("theta.constant_term", "a_0(theta_1) = h_K / w_K",
                               "the character is not the trivial character of O_K")
        add_eigenform_checks(report, "theta", theta, theta.level, "T_l theta_psi = a_l(theta_psi) theta_psi")

    with report.timed("family"):
        if field.class_number == 1 and field.D >= 7:
            rows = []
            for l in FAMILY_WEIGHTS:
                check = family_eigenvalue_check(field, scenario.p, l)
                rows.append(check.to_json())
                report.add_check(
                    f"theta.family.l{l}",
                    "roots of X^2 - a_p(g_(2l+3)) X + p^(2l+2) = {psi_(2l+2)(P), psi_(2l+2)(Pbar)}",
                    check.passed, lhs=sorted(str(r) for r in check.roots),
                    rhs=sorted(str(r) for r in check.expected))
            report.add_section("family", rows)
        else:
            report.add_skipped("theta.family", "CM family eigenvalue relation",
                               "needs h_K = 1 and D_K >= 7")
    return report


def build_eisenstein_report(run, k, D, N=None, Q=None):
    """
    E_{k,chi} for chi the Kronecker character of -D, its eigenform checks
    and, in weight one at level D, the comparison with theta_1.
    """
    field = _field(D)
    chi = DirichletCharacter.kronecker(field.disc)
    N = field.D if N is None else N
    Q = run.settings["Q_TRUNCATION"] if Q is None else Q
    report = ReportBuilder("eisenstein", seed=run.effective_seed)

    with report.timed("eisenstein"):
        series = eisenstein_series(k, chi, N, Q, min_truncation=run.settings["MIN_TRUNCATION"])
        body = series.to_json()
        body["normalisation"] = str(eisenstein_normalisation(k, chi))
        report.add_section("eisenstein", body)
        add_eigenform_checks(report, "eisenstein", series, N, "T_l E_(k,chi) = sigma_(k-1,chi)(l) E_(k,chi)")
        if k == 1 and N == field.D:
            theta = theta_series(RingClassCharacter.trivial(field), Q, min_truncation=run.settings["MIN_TRUNCATION"])
            report.add_check("eisenstein.theta", "E_(1,chi_K) = theta_1", series.agrees_with(theta.expansion),
                             lhs=series[0], rhs=theta[0])
        else:
            report.add_skipped("eisenstein.theta", "E_(1,chi_K) = theta_1", "weight one at level D_K only")
    return report


@click.command("classgroup")
@click.option("--D", "D", type=int, default=None, help="D_K, the field is Q(sqrt(-D_K)).")
@click.option("-c", "c", type=int, default=None, help="Conductor of the order.")
@click.option("--scenario", "scenario_path", type=click.Path(dir_okay=False), default=None,
              help="Take D_K and c from a scenario instead.")
@out_option
@pass_run
@exits_with_error_code
def classgroup_command(run: Run, D, c, scenario_path, out_path):
    """
    Class group of an imaginary quadratic order.

    Usage: starkrankin classgroup --D 23
    """
    if scenario_path is not None:
        scenario = open_scenario(run, scenario_path)
        D = scenario.field.D if D is None else D
        c = scenario.psi.c if c is None else c
    if D is None:
        raise ScenarioError("give --D or --scenario")
    emit(run, build_classgroup_report(run, D, 1 if c is None else c), out_path)


@click.command("theta")
@scenario_option
@click.option("-Q", "Q", type=int, default=None, help="Truncation, defaults to the scenario's.")
@out_option
@pass_run
@exits_with_error_code
def theta_command(run: Run, scenario_path, Q, out_path):
    """
    Theta series of the scenario's character.

    Usage: starkrankin theta --scenario scenario.json
    """
    scenario = open_scenario(run, scenario_path)
    report = build_theta_report(run, scenario, Q)
    report.add_scenario_echo(scenario)
    emit(run, report, out_path)


@click.command("eisenstein")
@click.option("-k", "k", type=int, required=True, help="Weight.")
@click.option("--D", "D", type=int, required=True, help="The character is the Kronecker symbol of -D.")
@click.option("-N", "N", type=int, default=None, help="Level, defaults to D.")
@click.option("-Q", "Q", type=int, default=None, help="Truncation.")
@out_option
@pass_run
@exits_with_error_code
def eisenstein_command(run: Run, k, D, N, Q, out_path):
    """
    Eisenstein series E_(k,chi) of the Kronecker character of -D.

    Usage: starkrankin eisenstein -k 1 --D 7 -Q 50
    """
    emit(run, build_eisenstein_report(run, k, D, N, Q), out_path)
