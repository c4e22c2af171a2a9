"""
The starkrankin command line interface.
"""

import logging

import click

from starkrankin import Settings, __version__, configure_logging, create_context
from starkrankin.commands import Run
from starkrankin.commands.forms import classgroup_command, eisenstein_command, theta_command
from starkrankin.commands.identities import verify_factors_command
from starkrankin.commands.stark import all_command, clear_cache_command, lambda_command, recover_command

logger = logging.getLogger(__name__)


@click.group()
@click.option("--config", "config_file", type=click.Path(dir_okay=False, exists=True), default=None,
              help="YAML settings file.")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG.")
@click.option("--timings", is_flag=True, help="Append elapsed times to the report.")
@click.option("--seed", type=int, default=None, help="Seed for sampled identity checks.")
@click.version_option(__version__, prog_name="starkrankin")
@click.pass_context
def cli(ctx, config_file, verbose, timings, seed):
    """Exact verification of elliptic Stark constants for theta series."""

    if isinstance(ctx.obj, Settings):
        settings = ctx.obj
    else:
        settings = create_context(settings_file=config_file)

    level = settings["LOG_LEVEL"]
    if verbose:
        level = "INFO" if verbose == 1 else "DEBUG"
    configure_logging(level)

    ctx.obj = Run(settings, timings=timings, seed=seed)


cli.add_command(classgroup_command)
cli.add_command(theta_command)
cli.add_command(eisenstein_command)
cli.add_command(verify_factors_command)
cli.add_command(lambda_command)
cli.add_command(recover_command)
cli.add_command(all_command)
cli.add_command(clear_cache_command)
