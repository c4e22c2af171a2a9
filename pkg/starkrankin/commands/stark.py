"""
Commands for the elliptic Stark constant lambda, the recovery of the
Heegner point from an iterated integral, the combined run and cache
maintenance.
"""

import logging

import click
import sympy

from starkrankin import cache
from starkrankin.commands import Run, emit, exits_with_error_code, open_scenario, out_option, pass_run, scenario_option
from starkrankin.commands.forms import build_classgroup_report, build_theta_report
from starkrankin.commands.identities import build_factor_report
from starkrankin.exceptions import DegenerateError, ScenarioError
from starkrankin.factors import (
    E_c,
    christmas,
    lambda_breakdown,
    lambda_general,
    lambda_theorem,
    lambda_zero,
    predicted_integral,
    render_value,
)
from starkrankin.lfun import euler_ratio_hr, euler_ratio_pet
from starkrankin.padic import FormalGroupContext, elliptic_unit_log, formal_log, recover_point
from starkrankin.utils import ReportBuilder, render

logger = logging.getLogger(__name__)

GENERAL_ANCHOR = "lambda = Eul_N(-1) f_infty(-1) f_p(f,psi) / f_p(psi^-2)"
THEOREM_ANCHOR = "lambda = (p - a_p psi(Pbar) + psi^2(Pbar))^2 / p * lambda_0 / (h_K g_K)"
CHRISTMAS_ANCHOR = "lambda = |E(F_p)|^2 / (p (p - 1) h_K) for psi = 1"
RECOVERY_ANCHOR = "P = exp_E(+-sqrt(log_p(u) / lambda * integral))"


def render_point(P):
    if P.is_infinity():
        return "O"
    return {"x": str(P.x), "y": str(P.y)}


def build_lambda_report(run, scenario):
    """
    lambda by the general assembly, by the closed theorem formula and by the
    point count formula whenever their hypotheses hold.
    """
    factors = scenario.factors
    p, prec = factors.p, scenario.precision.padic_digits
    report = ReportBuilder("lambda", seed=scenario.seed)

    with report.timed("euler_ratio"):
        hr = euler_ratio_hr(factors, -1)
        pet = euler_ratio_pet(factors, -1)
        report.add_section("euler_ratio", {
            "Eul_HR": hr.to_json(),
            "Eul_Pet": pet.to_json(),
            "E_c": render(E_c(factors.field, factors.c)),
        })
        if pet.reconstructed:
            report.add_note(f"Eul^Pet_N(-1) = {render(pet.value)} is reconstructed from local Petersson ratios since N = {factors.N} > D_K c^2")
        if factors.pet_discrepancy is not None:
            report.add_note(f"Eul^Pet_N(-1) supplied by the scenario: {factors.pet_discrepancy}")

    with report.timed("lambda"):
        breakdown = lambda_breakdown(factors)
        lam = lambda_general(factors)
        body = {
            "general": render_value(lam, p, prec, factors.zeta_residue),
            "breakdown": {name: render(value) for name, value in breakdown.items()},
            "lambda_0_branch": "psi^2 = 1" if factors.psi_square_trivial else "psi^2 != 1",
        }
        try:
            body["lambda_0"] = render(lambda_zero(factors))
        except DegenerateError as e:
            body["lambda_0"] = None
            report.add_note(str(e))

        theorem = None
        if factors.theorem_applies:
            theorem = lambda_theorem(factors)
            body["theorem"] = render_value(theorem, p, prec, factors.zeta_residue)
            report.add_check("lambda.general_vs_theorem", THEOREM_ANCHOR, lam == theorem, lam, theorem)
        else:
            report.add_skipped("lambda.general_vs_theorem", THEOREM_ANCHOR, "needs D_K = N_E and c = 1")

        if factors.psi.is_trivial() and sympy.isprime(factors.N_E):
            value = christmas(factors)
            body["christmas"] = render_value(value, p, prec)
            if factors.theorem_applies:
                report.add_check("lambda.general_vs_christmas", CHRISTMAS_ANCHOR, lam == value, lam, value)
                report.add_check("lambda.theorem_vs_christmas", CHRISTMAS_ANCHOR, theorem == value, theorem, value)
            else:
                report.add_skipped("lambda.general_vs_christmas", CHRISTMAS_ANCHOR, "needs D_K = N_E and c = 1")
        else:
            report.add_skipped("lambda.general_vs_christmas", CHRISTMAS_ANCHOR, "needs psi = 1 and N_E prime")
        report.add_section("lambda", body)
    return report, lam


def build_recover_report(run, scenario, synthetic=False, lam=None):
    """
    Recover +-P from the iterated integral and compare with the Heegner
    point of the scenario when one is given.

    Arguments:
        synthetic: generate the integral from the scenario's point first
        lam: lambda, computed when omitted
    """
    factors = scenario.factors
    p, prec = factors.p, scenario.precision.padic_digits
    report = ReportBuilder("recover", seed=scenario.seed)
    body = {}

    with report.timed("recover"):
        lam = lambda_general(factors) if lam is None else lam
        ctx = FormalGroupContext(factors.E, p, prec, margin=run.settings["T_MARGIN"])

        u_log = scenario.unit_log
        body["unit_log_source"] = "input"
        if u_log is None:
            if factors.h_K != 1 or not factors.psi.is_trivial():
                raise ScenarioError("inputs.unit_log is required unless h_K = 1 and psi = 1")
            u_log = elliptic_unit_log(factors.field, p, prec)
            body["unit_log_source"] = "elliptic unit"

        point = scenario.heegner_point
        integral = scenario.iterated_integral
        body["integral_source"] = "input"
        if synthetic:
            if point is None:
                raise ScenarioError("a synthetic integral needs inputs.heegner_point")
            integral = predicted_integral(ctx, factors, point, u_log, lam).value
            body["integral_source"] = "predicted from the Heegner point"
        if integral is None:
            raise ScenarioError("inputs.iterated_integral is required")

        points = recover_point(ctx, integral, u_log, lam, factors.zeta_residue)
        body.update(
            lam=render(lam),
            unit_log=str(u_log),
            integral=str(integral),
            parameter=str(points.parameter),
            plus=render_point(points.plus),
            minus=render_point(points.minus),
        )

        if point is None:
            report.add_skipped("recover.match", RECOVERY_ANCHOR, "no reference point supplied")
        else:
            reference = formal_log(ctx, point)
            body["reference_log"] = reference.to_dict()
            if points.plus.is_infinity():
                matched = reference.torsion or reference.value.is_zero()
            else:
                X = points.parameter
                digits = min(X.prec, reference.value.prec)
                matched = X.agrees_with(reference.value, digits) or (-X).agrees_with(reference.value, digits)
            report.add_check("recover.match", RECOVERY_ANCHOR, matched,
                             str(points.parameter), str(reference.value), kind="p-adic",
                             torsion=reference.torsion)
    report.add_section("recover", body)
    return report


def build_all_report(run, scenario, synthetic=False):
    report = ReportBuilder("all", seed=scenario.seed)
    report.merge(build_classgroup_report(run, scenario.field.D, scenario.psi.c))
    report.merge(build_theta_report(run, scenario))
    report.merge(build_factor_report(run, scenario))
    lam_report, lam = build_lambda_report(run, scenario)
    report.merge(lam_report)
    if scenario.iterated_integral is not None or (synthetic and scenario.heegner_point is not None):
        report.merge(build_recover_report(run, scenario, synthetic, lam))
    else:
        report.add_skipped("recover.match", RECOVERY_ANCHOR, "no iterated integral supplied")
    return report


@click.command("lambda")
@scenario_option
@out_option
@pass_run
@exits_with_error_code
def lambda_command(run: Run, scenario_path, out_path):
    """
    The elliptic Stark constant of the scenario by every applicable formula.

    Usage: starkrankin lambda --scenario scenario.json
    """
    scenario = open_scenario(run, scenario_path)
    report, _ = build_lambda_report(run, scenario)
    report.add_scenario_echo(scenario)
    emit(run, report, out_path)


@click.command("recover")
@scenario_option
@click.option("--synthetic", is_flag=True, help="Predict the integral from inputs.heegner_point first.")
@out_option
@pass_run
@exits_with_error_code
def recover_command(run: Run, scenario_path, synthetic, out_path):
    """
    Recover the Heegner point from the iterated integral.

    Usage: starkrankin recover --scenario scenario.json
    """
    scenario = open_scenario(run, scenario_path)
    report = build_recover_report(run, scenario, synthetic)
    report.add_scenario_echo(scenario)
    emit(run, report, out_path)


@click.command("all")
@scenario_option
@click.option("--synthetic", is_flag=True, help="Predict the integral from inputs.heegner_point first.")
@out_option
@pass_run
@exits_with_error_code
def all_command(run: Run, scenario_path, synthetic, out_path):
    """
    Every suite for one scenario in a single report.

    Usage: starkrankin all --scenario scenario.json
    """
    scenario = open_scenario(run, scenario_path)
    report = build_all_report(run, scenario, synthetic)
    report.add_scenario_echo(scenario)
    emit(run, report, out_path)


@click.command("clear-cache")
def clear_cache_command():
    """
    Clears the class group cache

    Usage: starkrankin clear-cache
    """
    cache.clear()
    click.echo("cache cleared")
