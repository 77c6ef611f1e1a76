#!/usr/bin/env python3
import os
import click
import logging
from pathlib import Path
from typing import Callable, Optional, Tuple

from dotenv import load_dotenv

from src import __version__
from src.errors import ErrorTracker, UsRisError
from src.experiments import (
    ExperimentContext,
    export_channels,
    run_convergence,
    run_dof_example,
    run_lemma1,
    run_pattern,
    run_power_dist,
    run_sinr_eval,
    run_snr_sweep,
)
from src.scenario import Variant
from src.utils.config import CONFIG_ENV_VAR, Config

logger = logging.getLogger(__name__)


def configure_logging(config: Config, verbose: bool) -> None:
    """Configure the root logger from the ``logging`` config section."""
    level = logging.DEBUG if verbose else getattr(logging, str(config.get('logging.level', 'INFO')).upper(),
                                                  logging.INFO)
    logging.basicConfig(
        level=level,
        format=config.get('logging.format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    )
    logging.getLogger().setLevel(level)


def run_experiment(ctx: click.Context, name: str, runner: Callable, **kwargs) -> None:
    """Run one experiment, write its summary and record any failure."""
    opts = ctx.obj
    out_dir = Path(opts['out'])
    try:
        experiment = ExperimentContext(
            config=opts['config'],
            out_dir=out_dir,
            seed=opts['seed'],
            restarts=opts['restarts'],
            progress=opts['progress'],
        )
        experiment.tracker.start_experiment(name, {
            'config': opts['config'].config_path,
            'fingerprint': opts['config'].fingerprint(),
            'seed': experiment.optimizer.seed,
            'restarts': experiment.optimizer.restarts,
            'version': __version__,
        })
        logger.info(f"Starting {name} (seed {experiment.optimizer.seed}, "
                    f"{experiment.optimizer.restarts} restarts)")
        paths = runner(experiment, **kwargs)
        experiment.tracker.end_experiment(f"{len(paths)} output(s) written")
        out_dir.mkdir(parents=True, exist_ok=True)
        experiment.tracker.save_summary(str(out_dir / 'run_summary.md'))

        click.echo(f"\n✨ {name} finished")
        for path in paths:
            click.echo(f"  {path}")

    except (UsRisError, OSError, ValueError) as e:
        logger.error(f"Error running {name}: {str(e)}")
        tracker = ErrorTracker(str(out_dir / 'errors'))
        tracker.log_exception(e, {'command': name, 'config': opts['config'].config_path},
                              component=name)
        logger.info(f"{len(tracker.get_errors(component=name))} {name} failure(s) recorded, "
                    f"{tracker.get_error_summary()['total']} in total under {tracker.log_dir}")
        click.echo(f"❌ Error: {str(e)}")
        raise click.Abort()


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False),
              help=f'YAML configuration (default: ${CONFIG_ENV_VAR} or config/config.yaml)')
@click.option('--seed', type=click.IntRange(min=0), help='Override optimizer.seed')
@click.option('--out', default='results', show_default=True, type=click.Path(file_okay=False),
              help='Directory for CSV outputs and the run summary')
@click.option('--restarts', type=click.IntRange(min=1), help='Override optimizer.restarts')
@click.option('--verbose', is_flag=True, help='Log at DEBUG level')
@click.option('--no-progress', is_flag=True, help='Hide progress bars')
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], seed: Optional[int], out: str,
        restarts: Optional[int], verbose: bool, no_progress: bool):
    """US-RIS uplink simulator - multi-layer user-side surfaces, experiments as CSV."""
    load_dotenv()
    try:
        config = Config(config_path or os.getenv(CONFIG_ENV_VAR))
    except UsRisError as e:
        click.echo(f"❌ Error: {str(e)}")
        raise click.Abort()
    configure_logging(config, verbose)
    ctx.obj = {'config': config, 'seed': seed, 'out': out, 'restarts': restarts,
               'progress': not no_progress}


@cli.command('snr-sweep')
@click.option('--point', 'points', type=float, multiple=True,
              help='Transmit power in dBW (repeatable; default: config sweep)')
@click.pass_context
def snr_sweep(ctx: click.Context, points: Tuple[float, ...]):
    """Detection SNR versus maximum transmit power for every variant."""
    run_experiment(ctx, 'snr-sweep', run_snr_sweep, points=list(points) or None)


@cli.command()
@click.pass_context
def converge(ctx: click.Context):
    """SNR against the number of optimizer iterations."""
    run_experiment(ctx, 'converge', run_convergence)


@cli.command('power-dist')
@click.option('--epsilon', type=click.FloatRange(min=0.0, min_open=True),
              help='Activation threshold as a fraction of the mean power')
@click.pass_context
def power_dist(ctx: click.Context, epsilon: Optional[float]):
    """Per-layer power distribution and element activation ratio."""
    run_experiment(ctx, 'power-dist', run_power_dist, epsilon=epsilon)


@cli.command()
@click.pass_context
def pattern(ctx: click.Context):
    """Azimuth radiation pattern of each surface variant."""
    run_experiment(ctx, 'pattern', run_pattern)


@cli.command()
@click.pass_context
def lemma1(ctx: click.Context):
    """Amplitude bound and zero-output construction of one second-layer element."""
    run_experiment(ctx, 'lemma1', run_lemma1)


@cli.command('sinr-eval')
@click.option('--combiner', type=click.Choice(['per-user', 'shared']),
              help='Combine each user with its own combiner or with user 1\'s')
@click.pass_context
def sinr_eval(ctx: click.Context, combiner: Optional[str]):
    """Per-user SINR and sum rate with one surface stack per user."""
    run_experiment(ctx, 'sinr-eval', run_sinr_eval, combiner=combiner)


@cli.command('dof-example')
@click.pass_context
def dof_example(ctx: click.Context):
    """Layer-2 power distribution under fixed layer-1 phase profiles."""
    run_experiment(ctx, 'dof-example', run_dof_example)


@cli.command('export-channels')
@click.option('--variant', type=click.Choice([v.value for v in Variant]),
              default=Variant.MULTI_LAYER.value, show_default=True)
@click.pass_context
def export_channels_cmd(ctx: click.Context, variant: str):
    """Write the synthesized channels of one variant as CSV."""
    run_experiment(ctx, 'export-channels', export_channels, variant=Variant(variant))


@cli.command()
def version():
    """Show version information."""
    click.echo(f"usris-sim v{__version__}")


if __name__ == '__main__':
    cli()
