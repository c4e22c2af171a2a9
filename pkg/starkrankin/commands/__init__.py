"""
click commands of the starkrankin front end and the plumbing they share.
"""

import functools
import logging

import click

from starkrankin.exceptions import DegenerateError, IdentityFailure, StarkError
from starkrankin.scenario import load_scenario

logger = logging.getLogger(__name__)


class Run:
    """Per invocation state handed to every command"""

    def __init__(self, settings, timings=False, seed=None):
        self.settings = settings
        self.timings = timings
        self.seed = seed

    @property
    def effective_seed(self):
        return self.settings["SEED"] if self.seed is None else self.seed


pass_run = click.make_pass_decorator(Run)

scenario_option = click.option(
    "--scenario", "scenario_path", required=True,
    type=click.Path(dir_okay=False), help="Scenario JSON file.")

out_option = click.option(
    "--out", "out_path", default=None,
    type=click.Path(dir_okay=False, writable=True), help="Write the report here instead of stdout.")


def exits_with_error_code(func):
    """
    Catches StarkError raised by the wrapped command and exits with the
    exception's exit code after printing a diagnostic.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DegenerateError as e:
            click.echo(f"degenerate scenario: {e.factor or 'a fudge factor'} vanishes ({e})", err=True)
            click.get_current_context().exit(e.exit_code)
        except StarkError as e:
            click.echo(f"{e.__class__.__name__}: {e}", err=True)
            click.get_current_context().exit(e.exit_code)
    return wrapper


def open_scenario(run, path):
    """Load a scenario; a seed given on the command line wins over the document"""
    scenario = load_scenario(path, run.settings)
    if run.seed is not None:
        scenario.seed = run.seed
    return scenario


def emit(run, report, out_path=None):
    """
    Write the report and fail the command if any check failed.
    """
    text = report.dumps(timings=run.timings)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        logger.info(f"report written to {out_path}")
    else:
        click.echo(text)
    failed = report.failed()
    if failed:
        raise IdentityFailure(f"failed checks: {', '.join(failed)}")
