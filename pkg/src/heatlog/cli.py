#!/usr/bin/env python3

"""Command line interface for heatlog."""

import sys
import inspect
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import wraps
from typing import Any, Dict, List, Optional

import click
import numpy as np
from rich.progress import track
from rich.table import Table

from .config import Config, FORMATS, RunConfig
from .convexity import (
    SearchConfig,
    continuous_probe,
    continuous_report,
    counterexample_search,
    tightness_report,
)
from .convexity.continuous import RESIDUAL_TOLERANCE
from .core.exceptions import SourceError
from .core.registry import get_checker, get_checker_info, list_checkers
from .core.reports import CheckReport, residual_step
from .gadget import main_dichotomy
from .hamming import (
    affine_audit,
    certificate_report,
    coset_identity_sweep,
    corruption_certificate,
    decision_table,
    padding_reduction,
    pdt_size_bound,
)
from .hamming.certificates import EXHAUSTIVE, RANDOM
from .hamming.f2 import from_bits
from .hamming.vertices import K_LOG_DELTA, K_LOG_K
from .heat import moment_sequence, spectral_moments
from .sources import FileSource, FixtureSource, InstanceSource, RandomSource, list_fixtures
from .utils import console, output_results, report_rows

LOG = logging.getLogger(__name__)

REPORT_COLUMNS = ("check", "instance", "verdict", "worst_slack", "steps")


def _create_checker(checker_class, **kwargs):
    """Create a checker, only passing kwargs some class in its hierarchy accepts."""
    accepted = set()
    for klass in inspect.getmro(checker_class):
        if "__init__" in vars(klass):
            accepted |= set(inspect.signature(klass.__init__).parameters)
    return checker_class(**{k: v for k, v in kwargs.items() if k in accepted})


def exit_codes(command):
    """Map errors to exit codes: 2 for unreadable input, 1 for everything else."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except SourceError as e:
            console.print(f"[red]Input error: {e}[/red]")
            sys.exit(2)
        except Exception as e:
            console.print(f"[red]Error: {e}[/red]")
            sys.exit(1)

    return wrapper


def instance_options(command):
    """Options selecting where instances come from."""
    options = [
        click.option("--fixture", type=click.Choice(list_fixtures()), help="Named fixture"),
        click.option("--random", "use_random", is_flag=True, help="Seeded random instances"),
        click.option("--kernel", type=click.Path(), help="Kernel JSON file"),
        click.option("--u", "u_file", type=click.Path(), help="u vector file (default uniform)"),
        click.option("--v", "v_file", type=click.Path(), help="v vector file (default u)"),
        click.option("--exact", is_flag=True, help="Rational arithmetic"),
        click.option("--weight", default="1", show_default=True, help="Path fixture weight"),
        click.option("--trials", default=100, show_default=True, help="Random instance count"),
        click.option("--size", "sizes", multiple=True, type=int, help="Random sizes (repeatable)"),
        click.option("--density", default=0.5, show_default=True, help="Random edge density"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _source(run: RunConfig, opts: Dict[str, Any]) -> InstanceSource:
    chosen = [bool(opts["fixture"]), opts["use_random"], bool(opts["kernel"])]
    if sum(chosen) != 1:
        raise click.UsageError("Choose exactly one of --fixture, --random or --kernel")
    if opts["fixture"]:
        return FixtureSource(opts["fixture"], opts["exact"], opts["weight"])
    if opts["use_random"]:
        sizes = opts["sizes"] or (3, 4, 5, 6, 8)
        return RandomSource(sizes, opts["density"], opts["trials"], run.seed)
    return FileSource(opts["kernel"], opts["u_file"], opts["v_file"], opts["exact"])


def _instance_flags(opts: Dict[str, Any]) -> Dict[str, Any]:
    flags = {"fixture": opts["fixture"], "kernel": opts["kernel"], "exact": opts["exact"]}
    if opts["use_random"]:
        flags.update(
            random=True,
            trials=opts["trials"],
            sizes=list(opts["sizes"] or (3, 4, 5, 6, 8)),
            density=opts["density"],
        )
    if opts["fixture"]:
        flags["weight"] = opts["weight"]
    if opts["kernel"]:
        flags.update(u=opts["u_file"], v=opts["v_file"])
    return flags


def _emit(
    run: RunConfig,
    results: List[Dict[str, Any]],
    rows: Optional[List[Dict[str, Any]]] = None,
    columns=None,
    title: str = "Results",
    instances=None,
):
    output_results(
        results if run.format == "json" else (rows if rows is not None else results),
        run.output,
        run.format,
        run=run.to_dict(),
        columns=columns,
        title=title,
        instances=instances,
    )


def _finish(reports: List[CheckReport], run: RunConfig, title: str, instances=None):
    _emit(
        run,
        [r.to_dict() for r in reports],
        report_rows(reports),
        REPORT_COLUMNS,
        title,
        instances,
    )
    failed = [r for r in reports if not r.passed]
    if failed:
        console.print(f"[red]{len(failed)} of {len(reports)} reports failed[/red]")
        sys.exit(1)
    console.print(f"[green]All {len(reports)} reports passed[/green]")


def _map(run: RunConfig, fn, items: list, description: str) -> list:
    """fn over items on the worker pool, results in input order."""
    with ThreadPoolExecutor(max_workers=run.threads) as pool:
        return list(
            track(pool.map(fn, items), total=len(items), description=description, console=console)
        )


@click.group()
@click.option("--config", "-c", help="Path to .env configuration file")
@click.option(
    "--debug",
    "-d",
    is_flag=True,
    help="Enable debug logging. To use, add the flag as a first argument!",
)
@click.option("--seed", type=int, help="Run seed [env HEATLOG_SEED, default 0]")
@click.option("--tol", type=float, help="Log-domain tolerance [env HEATLOG_TOL, default 1e-9]")
@click.option(
    "--format",
    "-f",
    "output_format",
    type=click.Choice(FORMATS),
    help="Output format [env HEATLOG_FORMAT, default json]",
)
@click.option("--out", "-o", help="Output file (default: stdout)")
@click.option("--threads", type=click.IntRange(min=1), help="Workers [env HEATLOG_THREADS]")
@click.pass_context
def cli(ctx, config, debug, seed, tol, output_format, out, threads):
    """Verification toolkit for heat moments of nonnegative symmetric kernels."""
    ctx.ensure_object(dict)

    # Initialize configuration
    ctx.obj["config"] = Config(config)

    # Set up logging
    if debug:
        logging.basicConfig(level=logging.DEBUG)
    else:
        ctx.obj["config"].setup_logging()

    ctx.obj["debug"] = debug
    ctx.obj["run"] = ctx.obj["config"].run_config(
        seed=seed, tol=tol, format=output_format, output=out, threads=threads
    )


@cli.command()
@instance_options
@click.option("--t-max", default=10, show_default=True, help="Largest step")
@click.option("--spectral", is_flag=True, help="Cross-check against the eigendecomposition")
@click.pass_context
@exit_codes
def moments(ctx, t_max, spectral, **opts):
    """Emit the (t, m_t, log2 m_t) table of one or more instances."""
    run = ctx.obj["run"].for_command(
        "moments", t_max=t_max, spectral=spectral, **_instance_flags(opts)
    )
    instances = list(_source(run, opts).get_instances())

    rows, residuals = [], []
    for instance in instances:
        S, u, v = instance.kernel, instance.u, instance.v
        m = moment_sequence(S, u, v, t_max, instance.name)
        check = spectral_moments(S, u, v, t_max) if spectral else None
        for row in m.to_rows():
            row["instance"] = instance.name
            if instance.exact:
                row["m_exact"] = str(m[row["t"]])
            if check is not None:
                row["spectral"] = float(check[row["t"]])
                residual = abs(row["m"] - row["spectral"]) / max(1.0, abs(row["m"]))
                row["spectral_residual"] = residual
                residuals.append(residual)
            rows.append(row)

    columns = ["instance", "t", "m", "log2_m"]
    columns += ["m_exact"] if any("m_exact" in r for r in rows) else []
    columns += ["spectral", "spectral_residual"] if spectral else []
    _emit(run, rows, rows, columns, "Heat moments", [i.to_dict() for i in instances])

    if residuals:
        step = residual_step("max |m - spectral|", max(residuals), run.tol)
        if not step.passed:
            console.print(f"[red]Spectral cross-check failed: residual {step.lhs}[/red]")
            sys.exit(1)
        console.print(f"[green]Spectral cross-check within {run.tol}[/green]")


@cli.command()
@click.argument("kind", type=click.Choice(list_checkers()))
@instance_options
@click.option("--epsilon", type=float, help="Dichotomy exponent loss [env HEATLOG_EPSILON]")
@click.option("--delta", type=float, help="Second-branch constant [env HEATLOG_DELTA]")
@click.option("--t-max", default=10, show_default=True, help="Largest step examined")
@click.option(
    "--lemma",
    "lemmas",
    multiple=True,
    help="Walk identity to verify: cost, decomposition, entropy or oracle (repeatable)",
)
@click.pass_context
@exit_codes
def check(ctx, kind, epsilon, delta, t_max, lemmas, **opts):
    """Run the named checker suite; exits 1 on any failed verdict."""
    run = ctx.obj["run"].for_command(
        "check",
        epsilon,
        delta,
        kind=kind,
        t_max=t_max,
        lemmas=list(lemmas),
        **_instance_flags(opts),
    )
    checker = _create_checker(
        get_checker(kind),
        tol=run.tol,
        epsilon=run.epsilon,
        delta=run.delta,
        t_max=t_max,
        debug=ctx.obj["debug"],
        lemmas=lemmas or None,
        oracle_guard=run.oracle_guard,
    )
    source = _source(run, opts)
    console.print(f"Checking {source.get_name()} with {checker}...")
    instances = list(source.get_instances())
    batches = _map(run, checker.check, instances, f"Checking {kind}...")
    reports = [report for batch in batches for report in batch]
    _finish(reports, run, f"{kind} checks", [i.to_dict() for i in instances])


@cli.command()
@click.option("--trials", default=100, show_default=True, help="Random instances to draw")
@click.option("--size", "sizes", multiple=True, type=int, help="Sizes cycled by trial")
@click.option("--t-min", default=2, show_default=True, help="Smallest step examined")
@click.option("--t-max", default=10, show_default=True, help="Largest step examined")
@click.option("--density", default=0.5, show_default=True, help="Edge density")
@click.option("--epsilon", type=float, help="Dichotomy exponent loss")
@click.option("--delta", type=float, help="Second-branch constant")
@click.pass_context
@exit_codes
def search(ctx, trials, sizes, t_min, t_max, density, epsilon, delta):
    """Look for counterexamples to the moment inequalities on random instances."""
    sizes = tuple(sizes) or SearchConfig.sizes
    run = ctx.obj["run"].for_command(
        "search",
        epsilon,
        delta,
        trials=trials,
        sizes=list(sizes),
        t_range=[t_min, t_max],
        density=density,
    )
    config = SearchConfig(
        sizes=sizes,
        t_range=(t_min, t_max),
        epsilon=run.epsilon,
        delta=run.delta,
        trials=trials,
        seed=run.seed,
        density=density,
        threads=run.threads,
        tol=run.tol,
    )
    with console.status(f"Searching {trials} instances..."):
        summary = counterexample_search(config)

    document = summary.to_dict()
    rows = [
        {"theorem": name, **{k: v for k, v in entry.items() if k != "argmin_instance"}}
        for name, entry in document["theorems"].items()
    ]
    _emit(run, [document], rows, None, "Counterexample search")
    if not summary.passed:
        console.print("[red]Counterexample candidates found[/red]")
        sys.exit(1)
    console.print("[green]No counterexample among the asserted inequalities[/green]")


@cli.command()
@instance_options
@click.option("--t", "steps", multiple=True, type=int, help="Step t (repeatable; default 2..t-max)")
@click.option("--t-max", default=10, show_default=True, help="Largest step when --t is absent")
@click.option("--epsilon", type=float, help="Dichotomy exponent loss")
@click.option("--no-pipeline", is_flag=True, help="Skip the gadget certification")
@click.pass_context
@exit_codes
def gadget(ctx, steps, t_max, epsilon, no_pipeline, **opts):
    """Which branch of the near-log-convexity dichotomy holds, per instance and step."""
    steps = sorted(set(steps)) or list(range(2, t_max + 1))
    run = ctx.obj["run"].for_command(
        "gadget", epsilon, steps=steps, pipeline=not no_pipeline, **_instance_flags(opts)
    )
    instances = list(_source(run, opts).get_instances())

    def dichotomies(instance):
        S, u, v = instance.kernel, instance.u, instance.v
        return [
            main_dichotomy(S, u, v, t, run.epsilon, run.tol, instance.name, not no_pipeline)
            for t in steps
        ]

    batches = _map(run, dichotomies, instances, "Dichotomy...")
    reports = [report for batch in batches for report in batch]
    _finish(reports, run, "Dichotomy", [i.to_dict() for i in instances])


@cli.command()
@instance_options
@click.option("--x-min", default=0.25, show_default=True, help="First grid point (> 0)")
@click.option("--x-max", default=8.0, show_default=True, help="Last grid point")
@click.option("--points", default=32, show_default=True, help="Grid size")
@click.option("--step", type=float, help="Finite-difference step (default from the grid)")
@click.option(
    "--residual-tol",
    default=RESIDUAL_TOLERANCE,
    show_default=True,
    help="Tolerance below which a residual is flagged",
)
@click.pass_context
@exit_codes
def continuous(ctx, x_min, x_max, points, step, residual_tol, **opts):
    """Profile f(x) = <v, exp(x(S - I)) u> and its log-convexity residual on a grid."""
    run = ctx.obj["run"].for_command(
        "continuous",
        x_min=x_min,
        x_max=x_max,
        points=points,
        step=step,
        residual_tol=residual_tol,
        **_instance_flags(opts),
    )
    grid = np.linspace(x_min, x_max, points)
    instances = list(_source(run, opts).get_instances())

    reports, rows = [], []
    for instance in instances:
        profile = continuous_probe(instance.kernel, instance.u, instance.v, grid, step)
        report = continuous_report(profile, residual_tol, instance.name)
        report.extras["profile"] = profile.to_rows()
        reports.append(report)
        rows.extend({"instance": instance.name, **row} for row in profile.to_rows())

    columns = ["t", "f", "logf", "residual"]
    if len(instances) > 1:
        columns.insert(0, "instance")
    _emit(
        run,
        [r.to_dict() for r in reports],
        rows,
        columns,
        "Continuous-time profile",
        [i.to_dict() for i in instances],
    )
    if not all(r.passed for r in reports):
        sys.exit(1)


@cli.command()
@click.option("--t", default=10, show_default=True, help="Path length")
@click.option("--eta", default=0.5, show_default=True, help="Strengthening to probe")
@click.pass_context
@exit_codes
def tightness(ctx, t, eta):
    """Whether the path family violates the dichotomy strengthened by (1 + eta)/2."""
    run = ctx.obj["run"].for_command("tightness", t=t, eta=eta)
    _finish([tightness_report(t, eta)], run, "Tightness")


@cli.group()
def hamming():
    """Corruption certificates and identities on the Boolean cube."""


@hamming.command()
@click.option(
    "--kind",
    type=click.Choice([K_LOG_DELTA, K_LOG_K]),
    default=K_LOG_DELTA,
    show_default=True,
    help="Separating hyperplane",
)
@click.option("--n", "n", required=True, type=click.IntRange(min=1), help="Cube dimension")
@click.option("--k", "k", required=True, type=click.IntRange(min=1), help="Flip count")
@click.option("--delta", required=True, type=float, help="Hyperplane constant")
@click.option("--exhaustive/--random", default=True, help="Vertex search mode")
@click.option("--trials", default=1000, show_default=True, help="Random vertices")
@click.option("--alpha1", type=float, help="First branch exponent (default 1 - epsilon)")
@click.option("--alpha2", type=float, help="Second branch constant (default delta(epsilon))")
@click.option("--epsilon", type=float, help="Dichotomy exponent loss")
@click.pass_context
@exit_codes
def corruption(ctx, kind, n, k, delta, exhaustive, trials, alpha1, alpha2, epsilon):
    """Search rank-one vertices for the largest value of the separating hyperplane."""
    mode = EXHAUSTIVE if exhaustive else RANDOM
    run = ctx.obj["run"].for_command(
        "hamming-corruption",
        epsilon,
        kind=kind,
        n=n,
        k=k,
        hyperplane_delta=delta,
        mode=mode,
        trials=trials,
        alpha1=alpha1,
        alpha2=alpha2,
    )
    with console.status(f"Searching {mode} vertices on n={n}..."):
        certificate = corruption_certificate(
            kind, n, k, delta, mode, trials, run.seed, alpha1, alpha2, run.epsilon
        )
    _finish([certificate_report(certificate)], run, "Corruption certificate")


@hamming.command()
@click.option("--n", "n", required=True, type=click.IntRange(min=1), help="Cube dimension")
@click.option("--k", "k", required=True, type=click.IntRange(min=2), help="Flip count")
@click.option("--delta", required=True, type=float, help="Hyperplane constant")
@click.option("--trials", default=1000, show_default=True, help="Random affine vertices")
@click.option("--epsilon", type=float, help="Dichotomy exponent loss")
@click.pass_context
@exit_codes
def pdt(ctx, n, k, delta, trials, epsilon):
    """Parity-decision-tree size bound with a random affine-vertex audit."""
    run = ctx.obj["run"].for_command(
        "hamming-pdt", epsilon, n=n, k=k, hyperplane_delta=delta, trials=trials
    )
    bound = pdt_size_bound(n, k, delta, epsilon=run.epsilon)
    if bound.flagged:
        LOG.warning(f"Size bound premises do not hold at n={n}, k={k}, delta={delta}")
    report = certificate_report(affine_audit(n, k, delta, trials, run.seed, run.epsilon))
    report.extras["size_bound"] = bound.to_dict()
    _finish([report], run, "Parity decision tree bound")


@hamming.command()
@click.option("--n", "n", required=True, type=click.IntRange(min=1), help="Cube dimension")
@click.option("--trials", default=1000, show_default=True, help="Random (B, c, k) draws")
@click.option("--k-max", default=6, show_default=True, help="Largest flip count drawn")
@click.option("--tol", type=float, default=1e-12, show_default=True, help="Residual tolerance")
@click.pass_context
@exit_codes
def identity(ctx, n, trials, k_max, tol):
    """Coset walk against the direct affine sum on random (B, c)."""
    run = ctx.obj["run"].for_command(
        "hamming-identity", n=n, trials=trials, k_max=k_max, identity_tol=tol
    )
    with console.status(f"Sweeping {trials} cosets on n={n}..."):
        report = coset_identity_sweep(n, trials, run.seed, k_max, tol)
    _finish([report], run, "Coset identity")


@hamming.command()
@click.argument("a")
@click.argument("b")
@click.option("--k", "k", required=True, type=click.IntRange(min=2), help="Target distance")
@click.pass_context
@exit_codes
def padding(ctx, a, b, k):
    """Pad A and B (bit strings, coordinate 0 first) to decide ||A - B|| = k."""
    if len(a) != len(b) or set(a + b) - {"0", "1"}:
        raise click.UsageError("A and B must be bit strings of equal length")
    run = ctx.obj["run"].for_command("hamming-padding", a=a, b=b, k=k)
    padded = padding_reduction(from_bits(a), from_bits(b), len(a), k)
    table = {
        str(d): {"first": sorted(first), "second": sorted(second)}
        for d, (first, second) in decision_table(k).items()
    }
    document = {**padded.to_dict(), "decision_table": table}
    _emit(run, [document], [padded.to_dict()], None, "Padding reduction")


@cli.command("list-checks")
@exit_codes
def list_checks_cmd():
    """List all available checkers."""
    checker_info = get_checker_info()

    table = Table(title="Available Checkers")
    table.add_column("Name", style="cyan")
    table.add_column("Description", style="green")
    table.add_column("Class", style="yellow")

    for name, info in checker_info.items():
        table.add_row(name, info.get("description", "No description"), info.get("class", "Unknown"))

    console.print(table)


def main():
    """Main entry point."""
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(1)
    except Exception as e:
        console.print(f"[red]Unexpected error: {e}[/red]")
        sys.exit(1)


if __name__ == "__main__":
    main()
