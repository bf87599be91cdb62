"""
Command-line interface for spinbatt.

Usage:
    spinbatt capacity --prep "Rz(200)Rx(33)"      Energetics of a prepared state
    spinbatt scan --prep "Rz(200)Rx(40)"          Hierarchical capacity scan
    spinbatt protocol --id 2 --prep "Rx(25)"      Measurement protocol 1, 2 or 3
    spinbatt evolve --t-final 0.05                Ground-manifold master equation
    spinbatt dephase --prep "Ry(90)"              Capacity along engineered dephasing
    spinbatt fid --prep "Ry(90)"                  FID readout and fit
    spinbatt --print-default-config               Annotated default configuration

Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.
"""

import asyncio
import functools
import logging
import sys
from typing import Any, Callable, Dict, Optional

import click

from .. import __version__
from ..core.config import load_config, render_default_config
from ..core.errors import SpinBatteryError
from ..core.registry import ExperimentRegistry
from . import experiments  # noqa: F401  registers the commands
from .experiments import resolve_state_request
from .records import ResultRecord, write_record, write_series

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _configure_logging(level: str) -> None:
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger().setLevel(level.upper())


def _common_options(command: Callable) -> Callable:
    options = [
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), default=None,
                     help='YAML run configuration (defaults apply to omitted fields)'),
        click.option('--seed', type=click.IntRange(0, 2**64 - 1), default=None, help='Override the noise seed'),
        click.option('--out', type=click.Path(file_okay=False), default=None, help='Output directory'),
        click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default=None,
                     help='json, or csv to also write the plot-ready series'),
        click.option('--joules', is_flag=True, help='Report energies in J instead of eV'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _execute(ctx: click.Context, name: str, options: Dict[str, Any], request: Dict[str, Any]) -> None:
    """Load config, run the experiment, write outputs; SpinBatteryError maps to its exit code"""
    try:
        config = load_config(options['config_path']).with_overrides(
            seed=options['seed'], out=options['out'], fmt=options['fmt'], joules=options['joules'],
        )
        _configure_logging((ctx.obj or {}).get('log_level') or config.logging.level)
        experiment = ExperimentRegistry.create(name, config)
        logger.info(f"Running {experiment!r} with {request}")
        payload = asyncio.run(experiment.run(**request))
        record = ResultRecord.create(config, name, request, payload)
        click.echo(write_record(record, config.output.directory))
        if config.output.format == 'csv':
            for path in write_series(experiment.series(), name, config.output.directory):
                click.echo(path)
    except SpinBatteryError as e:
        logger.error(f"{name} failed: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(e.exit_code)


def _print_default_config(ctx: click.Context, param: click.Parameter, value: bool) -> None:
    if not value or ctx.resilient_parsing:
        return
    click.echo(render_default_config())
    ctx.exit(0)


@click.group()
@click.version_option(version=__version__, prog_name='spinbatt')
@click.option('--print-default-config', is_flag=True, expose_value=False, is_eager=True,
              callback=_print_default_config, help='Print the annotated default configuration and exit')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              default=None, help='Overrides logging.level from the config')
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Spin quantum battery simulator: capacity, scans, protocols and dynamics."""
    ctx.ensure_object(dict)
    ctx.obj['log_level'] = log_level


def _command(name: str) -> Callable:
    """Register a subcommand whose body returns the experiment request"""

    def decorator(build_request: Callable) -> Callable:
        @functools.wraps(build_request)
        @click.pass_context
        def command(ctx: click.Context, config_path, seed, out, fmt, joules, **params):
            options = dict(config_path=config_path, seed=seed, out=out, fmt=fmt, joules=joules)
            try:
                request = build_request(**params)
            except SpinBatteryError as e:
                click.echo(f"Error: {e}", err=True)
                sys.exit(e.exit_code)
            _execute(ctx, name, options, request)

        return cli.command(name)(_common_options(command))

    return decorator


@_command('capacity')
@click.option('--bloch', default=None, help='Explicit Bloch vector "sx,sy,sz"')
@click.option('--prep', default=None, help='Preparation applied to (0,0,1), e.g. "Rz(200)Rx(33)"')
def capacity(bloch: Optional[str], prep: Optional[str]) -> Dict[str, Any]:
    """Capacity, ergotropy and entropy relations of one state."""
    return {'state': resolve_state_request(bloch, prep)}


@_command('scan')
@click.option('--prep', required=True, help='Preparation applied to (0,0,1)')
def scan(prep: str) -> Dict[str, Any]:
    """Hierarchical coarse-to-fine capacity scan."""
    return {'prep': prep}


@_command('protocol')
@click.option('--id', 'protocol_id', type=click.IntRange(1, 3), required=True, help='Protocol 1, 2 or 3')
@click.option('--prep', required=True, help='Preparation applied after pumping')
def protocol(protocol_id: int, prep: str) -> Dict[str, Any]:
    """Run a capacity-measurement protocol."""
    return {'protocol_id': protocol_id, 'prep': prep}


@_command('evolve')
@click.option('--initial', type=click.Choice(['mixed', 'stretched']), default=None, help='Initial density')
@click.option('--t-final', type=float, default=None, help='Integration horizon (s)')
def evolve(initial: Optional[str], t_final: Optional[float]) -> Dict[str, Any]:
    """Integrate the ground-manifold master equation."""
    return {'initial': initial, 't_final': t_final}


@_command('dephase')
@click.option('--prep', default='Ry(90)', show_default=True, help='Preparation applied to (0,0,1)')
@click.option('--tau', 'taus', type=float, multiple=True, help='Gradient-pulse duration (s); repeatable')
def dephase(prep: str, taus) -> Dict[str, Any]:
    """Capacity and entropy relations along a dephasing sweep."""
    return {'prep': prep, 'taus': list(taus) if taus else None}


@_command('fid')
@click.option('--prep', default='Ry(90)', show_default=True, help='Preparation applied to (0,0,1)')
def fid(prep: str) -> Dict[str, Any]:
    """Simulated FID readout and fit."""
    return {'prep': prep}


def main() -> None:
    cli(prog_name='spinbatt')


if __name__ == '__main__':
    main()
