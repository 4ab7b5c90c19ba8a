#!/usr/bin/env python3
"""
ngdef - Deformations of normed groupoids and their tangent structures.

This module provides the experiment CLI: ``verify`` runs check suites on a
model, ``limits`` tabulates limit estimates of tangent operations and
``tangent`` checks the dilatation structure of one fiber.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from .analysis import (CheckReport, LimitEstimate, default_suite_registry, fiber_dilatation_structure,
                       run_check_suite, tangent_distance, tangent_norm, tangent_op, write_limit_csv,
                       write_reports_json)
from .analysis.structure import FIBER_CHECKS, Verdict
from .config import DEFAULTS, ExperimentConfig
from .errors import (ConfigError, DomainExhausted, InvalidModelSpec, InvalidSampler, NotConverging, NotGw,
                     UnknownSuite, Unsupported)
from .groupoid import Arrow, describe
from .models import ModelBundle, build_model, default_model_registry

__version__ = "0.1.0"

# Errors reported as usage errors (exit 2).
USAGE_ERRORS = (ConfigError, InvalidModelSpec, InvalidSampler, UnknownSuite, Unsupported, ValueError)

# Errors reported as failed checks (exit 1).
CHECK_FAILURES = (NotConverging, DomainExhausted, NotGw)

# Number of points each limit operation takes per row.
OP_ARITY = {"distance": 2, "norm": 1, "sum": 2, "diff": 2, "inv": 1, "dilatation": 2}


# Configure logger for ngdef output
def setup_logger(verbose: bool = False) -> logging.Logger:
    """Set up a logger with clear ngdef formatting."""
    logger = logging.getLogger('ngdef')

    # Clear any existing handlers
    logger.handlers.clear()

    level = logging.DEBUG if verbose else logging.INFO
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter('[ngdef] %(message)s'))

    logger.addHandler(console_handler)
    logger.setLevel(level)
    logger.propagate = False  # Prevent duplicate output

    return logger


# Initialize the logger
logger = setup_logger()


def parse_value(raw: Optional[str]) -> Any:
    """Read a point or object given on the command line: JSON when it parses, the raw string otherwise."""
    if raw is None:
        return None
    try:
        return json.loads(raw)
    except ValueError:
        return raw


def read_points(path: str) -> List[List[Any]]:
    """
    Read a points file: a JSON array of rows, each row a list of points.

    Raises:
        ConfigError: If the file is unreadable, not an array or empty
    """
    try:
        text = Path(path).read_text()
        rows = json.loads(text) if text.strip() else []
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read points file {path}: {e}")
    if not isinstance(rows, list):
        raise ConfigError(f"points file {path} must hold a JSON array of rows")
    if not rows:
        raise ConfigError(f"points file {path} has no rows")
    return [row if isinstance(row, list) else [row] for row in rows]


class Experiment:
    """
    Runs the experiments behind the CLI commands.

    Holds the configuration defaults together with the model and suite
    registries, so tests and embedding code can swap either registry.
    """

    DEFAULT_CONFIG: Dict[str, Any] = DEFAULTS

    def __init__(self):
        self.model_registry = default_model_registry()
        self.suite_registry = default_suite_registry()

    def load_config(self, path: Optional[str] = None) -> ExperimentConfig:
        """
        Load a configuration file, or the defaults when no file is given.

        Raises:
            ConfigError: If the file is invalid
        """
        if path is None:
            return ExperimentConfig()
        return ExperimentConfig.load(path)

    def get_model_info(self) -> Dict[str, str]:
        return self.model_registry.info()

    def get_suite_info(self) -> Dict[str, str]:
        return self.suite_registry.info()

    def build(self, config: ExperimentConfig) -> ModelBundle:
        bundle = build_model(config.model_spec(), self.model_registry, **config.model_params())
        logger.debug(f"Built model {bundle.name}")
        return bundle

    def verify(self, config: ExperimentConfig) -> List[CheckReport]:
        """
        Run the configured suites, or every applicable suite when none is configured.

        Raises:
            UnknownSuite: For an unregistered suite id
            Unsupported: If a requested suite does not apply to the model
        """
        bundle = self.build(config)
        suites = config.suites or self.suite_registry.applicable(bundle)
        if not suites:
            raise Unsupported(f"no suite applies to model {bundle.name}")
        sampler, schedule = config.sampler(), config.schedule()
        return [run_check_suite(bundle, suite_id, sampler, schedule, config.tol, config.limit_tol,
                                self.suite_registry)
                for suite_id in suites]

    def limits(self, config: ExperimentConfig) -> Tuple[List[LimitEstimate], List[int]]:
        """
        Estimate one tangent operation for every row of the points file.

        Returns:
            The estimates that could be computed, and the indices of rows that
            did not converge

        Raises:
            ConfigError: If the operation or the points file is missing or invalid
            ValueError: If a row has the wrong number of points
        """
        if config.op is None:
            raise ConfigError("no operation given; pass --op or set 'op' in the configuration")
        if config.points is None:
            raise ConfigError("no points file given; pass --points or set 'points' in the configuration")
        rows = read_points(config.points)
        bundle = self.build(config)
        bundle.require_deformation()
        x = bundle.object(parse_value(config.base) if isinstance(config.base, str) else config.base)

        estimates, failed = [], []
        for index, row in enumerate(rows):
            if len(row) != OP_ARITY[config.op]:
                raise ValueError(f"row {index} of {config.points}: {config.op} takes {OP_ARITY[config.op]} "
                                 f"points, got {len(row)}")
            arrows = [self._fiber_arrow(bundle, x, p) for p in row]
            try:
                estimate = self._estimate(bundle, config, x, arrows)
            except NotConverging as e:
                logger.warning(f"Row {index} does not converge: {e}")
                estimates.append(e.estimate)
                failed.append(index)
                continue
            except DomainExhausted as e:
                logger.warning(f"Row {index} leaves the domain: {e}")
                failed.append(index)
                continue
            logger.debug(f"Row {index}: {describe(estimate.value)} (residual {estimate.final_residual:.3g})")
            estimates.append(estimate)
        return estimates, failed

    def _fiber_arrow(self, bundle: ModelBundle, x: Any, point: Any) -> Arrow:
        G = bundle.require_groupoid()
        if not hasattr(G, "arrow_between"):
            raise Unsupported(f"model {bundle.name} cannot turn points into fiber arrows")
        return G.arrow_between(bundle.object(point), x)

    def _estimate(self, bundle: ModelBundle, config: ExperimentConfig, x: Any,
                  arrows: Sequence[Arrow]) -> LimitEstimate:
        d = bundle.deformation
        schedule, tol = config.schedule(), config.limit_tol
        if config.op == "distance":
            return tangent_distance(d, arrows[0], arrows[1], schedule, tol)
        if config.op == "norm":
            return tangent_norm(d, arrows[0], schedule, tol)
        mu = d.gamma.from_modulus(config.mu)
        return tangent_op(d, config.op, bundle.groupoid.identity(x), arrows, schedule, mu, tol)

    def tangent(self, config: ExperimentConfig) -> Tuple[Verdict, Any, List[CheckReport]]:
        """
        Check the dilatation structure of the fiber over the configured object.

        Returns:
            ``(verdict, object, reports)``; the verdict is ``gw`` when every
            selected check passes and ``neither`` otherwise
        """
        bundle = self.build(config)
        d = bundle.require_deformation()
        x = bundle.object(parse_value(config.object) if isinstance(config.object, str) else config.object)
        checks = FIBER_CHECKS if config.check == "all" else (config.check,)
        try:
            structure = fiber_dilatation_structure(d, x, config.sampler(), config.schedule(), config.tol,
                                                   config.limit_tol, checks=checks, model=bundle.name)
        except NotGw as e:
            return Verdict.NEITHER, x, e.reports
        return Verdict.WEAK, x, structure.reports


def _write_json(data: Any, out: Optional[str]) -> None:
    text = json.dumps(data, indent=2)
    if out is None:
        click.echo(text)
    else:
        Path(out).write_text(text + "\n")
        logger.info(f"Wrote {out}")


def _settings(ctx: click.Context, **flags: Any) -> ExperimentConfig:
    """Configuration file (or defaults) overridden by explicit flags, validated."""
    experiment = ctx.obj['experiment']
    config = experiment.load_config(ctx.obj.get('config'))
    return config.merged(**flags).validate()


def _fail(ctx: click.Context, error: BaseException) -> None:
    """Map an exception raised by a command onto the exit-code contract."""
    if isinstance(error, CHECK_FAILURES):
        click.echo(f"Error: {error}", err=True)
        ctx.exit(1)
    if isinstance(error, USAGE_ERRORS):
        raise click.UsageError(str(error), ctx)
    if isinstance(error, KeyboardInterrupt):
        click.echo("\nOperation cancelled by user.", err=True)
        ctx.exit(130)
    click.echo(f"Unexpected error: {error}", err=True)
    import traceback
    traceback.print_exception(type(error), error, error.__traceback__)
    ctx.exit(2)


@click.group(invoke_without_command=True)
@click.option('--version', '-V', is_flag=True, help='Show version and exit')
@click.option('--list-models', is_flag=True, help='List available models')
@click.option('--list-suites', is_flag=True, help='List available check suites')
@click.option('--verbose', '-v', is_flag=True, help='Log per-sample detail')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='Experiment configuration (TOML or JSON)')
@click.pass_context
def cli(ctx, version, list_models, list_suites, verbose, config_path):
    """Verify deformations of normed groupoids and estimate their tangent structures."""
    setup_logger(verbose)
    ctx.ensure_object(dict)
    ctx.obj['experiment'] = Experiment()
    ctx.obj['config'] = config_path

    if version:
        click.echo(f"ngdef {__version__}")
        ctx.exit()

    if list_models or list_suites:
        experiment = ctx.obj['experiment']
        if list_models:
            click.echo("Available models:")
            for name, description in experiment.get_model_info().items():
                click.echo(f"  {name}: {description}")
        if list_suites:
            click.echo("Available suites:")
            for name, description in experiment.get_suite_info().items():
                click.echo(f"  {name}: {description}")
        ctx.exit()

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


def model_options(command):
    """Options shared by every command that builds a model and samples it."""
    options = [
        click.option('--model', '-m', help='Model spec, e.g. euclidean(2) or finite(path.json)'),
        click.option('--dim', type=int, help='Dimension, for models that take one'),
        click.option('--path', help='Fixture path, for finite models'),
        click.option('--samples', '-n', type=int, help='Number of samples'),
        click.option('--seed', type=int, envvar='NGDEF_SEED', help='Random seed (default $NGDEF_SEED or 0)'),
        click.option('--tol', type=float, help='Tolerance of exact identities'),
        click.option('--limit-tol', type=float, help='Tolerance of limit estimates'),
        click.option('--radius', type=float, help='Sampling radius'),
        click.option('--lambda', 'lam', type=float, help='Ratio of the geometric eps schedule'),
        click.option('--start', type=int, help='First exponent of the eps schedule'),
        click.option('--steps', type=int, help='Number of scales in the eps schedule'),
        click.option('--out', '-o', type=click.Path(dir_okay=False), help='Output file'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@cli.command()
@model_options
@click.option('--suite', '-s', 'suites', multiple=True, help='Suite id (repeatable; default all applicable)')
@click.option('--center', help='Sampling center (JSON)')
@click.pass_context
def verify(ctx, suites, center, **flags):
    """Run check suites on a model and write their reports as JSON."""
    try:
        config = _settings(ctx, suites=suites, center=parse_value(center), **flags)
        reports = ctx.obj['experiment'].verify(config)
        if config.out is None:
            _write_json([r.to_dict() for r in reports], None)
        else:
            write_reports_json(reports, config.out)
    except (click.exceptions.Exit, click.UsageError):
        raise
    except (Exception, KeyboardInterrupt) as e:
        _fail(ctx, e)
        return
    failed = [r.check for r in reports if not r.passed]
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        logger.info(f"{status} {report.check}: max violation {report.max_violation:.3g}")
    if failed:
        click.echo(f"Failed suites: {', '.join(failed)}", err=True)
        ctx.exit(1)


@cli.command()
@model_options
@click.option('--op', type=click.Choice(list(OP_ARITY)), help='Tangent operation')
@click.option('--base', help='Base object (JSON); the model default when omitted')
@click.option('--points', type=click.Path(exists=True, dir_okay=False), help='JSON array of point rows')
@click.option('--mu', type=float, help='Scale of the limit dilatation')
@click.pass_context
def limits(ctx, op, base, points, mu, **flags):
    """Tabulate eps -> 0 limits of a tangent operation as CSV."""
    try:
        config = _settings(ctx, op=op, base=base, points=points, mu=mu, **flags)
        estimates, failed = ctx.obj['experiment'].limits(config)
        if config.out is not None:
            write_limit_csv(estimates, config.out)
        else:
            for index, estimate in enumerate(estimates):
                click.echo(json.dumps({"row": index, **estimate.to_dict()}))
    except (click.exceptions.Exit, click.UsageError):
        raise
    except (Exception, KeyboardInterrupt) as e:
        _fail(ctx, e)
        return
    if failed:
        click.echo(f"Rows without a limit: {', '.join(map(str, failed))}", err=True)
        ctx.exit(1)


@cli.command()
@model_options
@click.option('--object', 'obj', help='Object whose fiber is checked (JSON); the model default when omitted')
@click.option('--check', type=click.Choice(["all", *FIBER_CHECKS]), help='Fiber check to run')
@click.pass_context
def tangent(ctx, obj, check, **flags):
    """Check the dilatation structure of one fiber and write the verdict as JSON."""
    try:
        config = _settings(ctx, object=obj, check=check, **flags)
        verdict, x, reports = ctx.obj['experiment'].tangent(config)
        _write_json({
            "model": reports[0].model if reports else config.model,
            "object": describe(x),
            "verdict": verdict.value,
            "reports": [r.to_dict() for r in reports],
        }, config.out)
    except (click.exceptions.Exit, click.UsageError):
        raise
    except (Exception, KeyboardInterrupt) as e:
        _fail(ctx, e)
        return
    if verdict is Verdict.NEITHER:
        failed = [r for r in reports if not r.passed]
        for report in failed:
            click.echo(f"Failed {report.check}: witnesses {json.dumps(describe(report.witnesses))}", err=True)
        ctx.exit(1)


def main():
    """Main entry point for the ngdef CLI."""
    cli()


if __name__ == "__main__":
    main()
