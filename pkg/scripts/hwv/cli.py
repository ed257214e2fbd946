import logging
import sys
import time
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from .abp import NcAbp, abp_layer_ranks, abp_minimize, ncw
from .cli_helper import EvaluationConfig, RunReport, read_model, read_tableau, run_evaluation, write_model
from .hwv import multiplicity, multiplicity_exact
from .polynomial import DensePoly, WaringPoint, waring_expand
from .reductions import SimpleGraph, gen_3col_counting, gen_3col_decision, vandermonde_point
from .tableau import Partition, grid_family, is_semistandard, tableau_graph
from .treedec import minfill_decomposition
from .utils import (
    DEFAULT_COUNTING_DEGREE,
    DEFAULT_DECISION_DEGREE,
    EXIT_CROSS_CHECK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    LOG_LEVEL_ENV_VAR,
    THREADS_ENV_VAR,
    CrossCheckError,
    Method,
    OutputFormat,
    ParseError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

TESTS_DIR = Path(__file__).resolve().parent.parent / "tests" / "hwv"


class HwvGroup(click.Group):
    """Maps library exceptions onto the fixed exit codes."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except (ParseError, ValidationError) as e:
            click.echo(f"parse error: {e}", err=True)
            ctx.exit(EXIT_PARSE)
        except PreconditionError as e:
            click.echo(f"precondition failed: {e}", err=True)
            ctx.exit(EXIT_PRECONDITION)
        except CrossCheckError as e:
            click.echo(f"cross-check failed: {e}", err=True)
            ctx.exit(EXIT_CROSS_CHECK)


def _emit(ctx: click.Context, report: RunReport) -> None:
    click.echo(report.render(ctx.obj["format"]))


def _store_format(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> None:
    if value is not None:
        ctx.ensure_object(dict)["format"] = OutputFormat(value)


# the group value stays in effect unless a subcommand names its own
format_option = click.option(
    "--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default=None,
    expose_value=False, callback=_store_format, help="Report format for this command",
)


@click.group(cls=HwvGroup)
@click.option("--format", "output_format", type=click.Choice([f.value for f in OutputFormat]), default=OutputFormat.JSON.value, help="Report format")
@click.option("--threads", type=click.IntRange(min=1), default=1, envvar=THREADS_ENV_VAR, show_envvar=True, help="Worker processes for the naive evaluator")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False), default="WARNING", envvar=LOG_LEVEL_ENV_VAR, show_envvar=True)
@click.pass_context
def cli(ctx: click.Context, output_format: str, threads: int, log_level: str):
    """Evaluate highest weight vectors of Young tableaux at symmetric tensors."""
    logging.basicConfig(level=log_level.upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    ctx.ensure_object(dict)
    ctx.obj["format"] = OutputFormat(output_format)
    ctx.obj["threads"] = threads


@cli.command("eval")
@click.option("--tableau", "tableau_path", type=click.Path(exists=True, dir_okay=False), required=True, help="Tableau JSON file")
@click.option("--point", "point_path", type=click.Path(exists=True, dir_okay=False), help="Waring point JSON file")
@click.option("--abp", "abp_path", type=click.Path(exists=True, dir_okay=False), help="ncABP JSON file")
@click.option("--method", type=click.Choice([m.value for m in Method if m != Method.SHORTCUT]), default=Method.ABP.value)
@click.option("--decomp", "decomp_path", type=click.Path(exists=True, dir_okay=False), help="Tree decomposition JSON; min-fill when absent")
@click.option("--seed", type=int, default=0)
@click.option("--minimize-bags", is_flag=True, help="Shrink computation tree bags before evaluating")
@click.option("--dump-ct", type=click.Path(dir_okay=False), help="Write the computation tree JSON here")
@format_option
@click.pass_context
def eval_command(ctx, tableau_path, point_path, abp_path, method, decomp_path, seed, minimize_bags, dump_ct):
    """Evaluate the tableau's highest weight vector at a point or an ABP."""
    if bool(point_path) == bool(abp_path):
        raise click.UsageError("exactly one of --point and --abp is required")
    t = read_tableau(tableau_path)
    point = read_model(point_path, WaringPoint) if point_path else None
    abp = read_model(abp_path, NcAbp) if abp_path else None
    config = EvaluationConfig(threads=ctx.obj["threads"], minimize_bags=minimize_bags, seed=seed)
    report = run_evaluation(t, point, abp, Method(method), config, decomp_path=decomp_path, dump_ct=dump_ct)
    _emit(ctx, report)


def _read_poly(poly_path: Optional[str], point_path: Optional[str]) -> DensePoly:
    if bool(poly_path) == bool(point_path):
        raise click.UsageError("exactly one of --poly and --point is required")
    if poly_path:
        return read_model(poly_path, DensePoly)
    return waring_expand(read_model(point_path, WaringPoint))


@cli.command("ncw")
@click.option("--poly", "poly_path", type=click.Path(exists=True, dir_okay=False), help="Dense polynomial JSON file")
@click.option("--point", "point_path", type=click.Path(exists=True, dir_okay=False), help="Waring point JSON file")
@format_option
@click.pass_context
def ncw_command(ctx, poly_path, point_path):
    """Noncommutative width: the largest flattening rank."""
    start = time.perf_counter()
    p = _read_poly(poly_path, point_path)
    width = ncw(p)
    ranks = abp_layer_ranks(p)
    report = RunReport(
        command="ncw", result=str(width), details={"layer_ranks": ranks, "size": sum(ranks)},
        wall_time=time.perf_counter() - start,
    )
    _emit(ctx, report)


@cli.command("minabp")
@click.option("--poly", "poly_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@format_option
@click.pass_context
def minabp_command(ctx, poly_path, out_path):
    """Write the minimal-width ncABP of a polynomial."""
    start = time.perf_counter()
    abp = abp_minimize(read_model(poly_path, DensePoly))
    write_model(abp, out_path)
    report = RunReport(
        command="minabp", details={"layers": abp.layers, "size": sum(abp.layers), "out": out_path},
        wall_time=time.perf_counter() - start,
    )
    _emit(ctx, report)


@cli.group("gen", cls=HwvGroup)
def gen():
    """Generate instance files."""


def _write_instance(prefix: str, tableau, point=None) -> dict:
    files = {"tableau": f"{prefix}.tableau.json"}
    write_model(tableau, files["tableau"])
    if point is not None:
        files["point"] = f"{prefix}.point.json"
        write_model(point, files["point"])
    return files


@gen.command("coloring")
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "d", type=int, default=DEFAULT_DECISION_DEGREE, show_default=True)
@click.option("--out", "prefix", required=True, help="Output file prefix")
@format_option
@click.pass_context
def gen_coloring(ctx, graph_path, d, prefix):
    """3-colorability instance: nonzero value iff the graph is 3-colorable."""
    t, p = gen_3col_decision(read_model(graph_path, SimpleGraph), d)
    _emit(ctx, RunReport(command="gen coloring", details={"files": _write_instance(prefix, t, p), "n": t.n, "d": t.d}))


@gen.command("counting")
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "d", type=int, default=DEFAULT_COUNTING_DEGREE, show_default=True)
@click.option("--out", "prefix", required=True, help="Output file prefix")
@format_option
@click.pass_context
def gen_counting(ctx, graph_path, d, prefix):
    """3-coloring counting instance over Q(zeta6)."""
    t, p = gen_3col_counting(read_model(graph_path, SimpleGraph), d)
    _emit(ctx, RunReport(command="gen counting", details={"files": _write_instance(prefix, t, p), "n": t.n, "d": t.d}))


@gen.command("grid")
@click.argument("k", type=click.IntRange(min=1))
@click.option("--out", "prefix", required=True, help="Output file prefix")
@format_option
@click.pass_context
def gen_grid(ctx, k, prefix):
    """Two-row semistandard tableau of the doubled-border 2k x 2k grid."""
    t = grid_family(k)
    graph = tableau_graph(t)
    td = minfill_decomposition(graph.simple_graph())
    details = {
        "files": _write_instance(prefix, t),
        "n": t.n,
        "d": t.d,
        "semistandard": is_semistandard(t),
        "degrees": graph.degrees(),
        "minfill_width": td.width,
    }
    _emit(ctx, RunReport(command="gen grid", details=details))


@gen.command("vandermonde")
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--r", "r", type=click.IntRange(min=0), required=True)
@click.option("--d", "d", type=click.IntRange(min=1), required=True)
@click.option("--out", "prefix", required=True, help="Output file prefix")
@format_option
@click.pass_context
def gen_vandermonde(ctx, m, r, d, prefix):
    """Generic rational point with moment-curve forms."""
    p = vandermonde_point(m, r, d)
    path = f"{prefix}.point.json"
    write_model(p, path)
    _emit(ctx, RunReport(command="gen vandermonde", details={"files": {"point": path}}))


def _parse_shape(value: str) -> Partition:
    try:
        return Partition(parts=tuple(int(x) for x in value.split(",") if x.strip()))
    except (ValueError, ValidationError) as e:
        raise click.BadParameter(f"not a partition: {value}") from e


@cli.command("multiplicity")
@click.option("--shape", required=True, help="Comma-separated partition, e.g. 2,2")
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--d", "d", type=click.IntRange(min=1), required=True)
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--samples", type=click.IntRange(min=1), default=None, help="Random points; defaults to 2 * #SSYT + 4")
@click.option("--seed", type=int, default=0)
@click.option("--exact", is_flag=True, help="Use the exact lattice evaluation instead of random samples")
@format_option
@click.pass_context
def multiplicity_command(ctx, shape, n, d, m, samples, seed, exact):
    """Dimension of the highest weight vector space of the given weight."""
    start = time.perf_counter()
    partition = _parse_shape(shape)
    stats: dict = {}
    if exact:
        value = multiplicity_exact(partition, n, d, m, stats=stats)
        method = "exact"
    else:
        value = multiplicity(partition, n, d, m, samples=samples, seed=seed, stats=stats)
        method = "sampled"
    report = RunReport(
        command="multiplicity", result=str(value), method=method,
        details={"shape": list(partition.parts), "n": n, "d": d, "m": m, **stats},
        wall_time=time.perf_counter() - start, seed=seed,
    )
    _emit(ctx, report)


@cli.command("selftest")
@click.option("--slow", is_flag=True, help="Include the long-running acceptance checks")
@click.pass_context
def selftest_command(ctx, slow):
    """Run the test suite; the exit status is pytest's."""
    import pytest

    args = ["-q", str(TESTS_DIR)]
    if not slow:
        args += ["-m", "not slow"]
    ctx.exit(int(pytest.main(args)))


def main() -> None:
    cli(prog_name="hwv")


if __name__ == "__main__":
    main()
