"""Command line interface: ``szcommunity generate | walk | detect | plot-data``.

Every option can also be set through an environment variable named
``SZCOMMUNITY_<COMMAND>_<OPTION>``, e.g. ``SZCOMMUNITY_DETECT_EPSILON=1e-5``.

Exit codes: 0 success, 2 usage or configuration error, 3 unreadable input
file, 4 walk did not converge within ``--max-steps``.
"""

from __future__ import annotations

import sys
from dataclasses import replace

import click

from . import generators
from .community import DetectionConfig, detect_communities
from .exceptions import ConvergenceError, GraphInputError, ParseError
from .graph import UndirectedGraph, largest_connected_component
from .io import (
    DATASETS,
    ResultDocument,
    load_dataset,
    read_distribution_csv,
    read_graph,
    read_trace_csv,
    write_distribution_csv,
    write_dot,
    write_edge_list,
    write_result,
    write_trace_csv,
)
from .walk import DEFAULT_EPSILON, run_walk

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CONVERGENCE = 4
ENV_PREFIX = "SZCOMMUNITY"

_FAMILY_PARAMS = {
    "barbell": {"r": int, "s": int},
    "caveman": {"l": int, "k": int, "p": float},
    "planted": {"l": int, "k": int, "pin": float, "pout": float},
}


class ParseFailure(click.ClickException):
    exit_code = EXIT_PARSE


class ConvergenceFailure(click.ClickException):
    exit_code = EXIT_CONVERGENCE


class ConfigFailure(click.ClickException):
    exit_code = EXIT_USAGE


def _generate(family: str, params: dict, seed: int | None) -> UndirectedGraph:
    try:
        if family == "barbell":
            return generators.barbell(params["r"], params["s"])
        if family == "caveman":
            return generators.relaxed_caveman(params["l"], params["k"], params["p"], seed)
        if family == "planted":
            return generators.planted_partition(
                params["l"], params["k"], params["pin"], params["pout"], seed
            )
    except KeyError as exc:
        raise ConfigFailure(f"{family}: missing parameter {exc.args[0]!r}") from None
    except GraphInputError as exc:
        raise ConfigFailure(str(exc)) from None
    raise ConfigFailure(f"unknown family {family!r}; choose from {sorted(_FAMILY_PARAMS)}")


def parse_generator_spec(spec: str) -> tuple[str, dict]:
    """``"planted:l=3,k=4,pin=0.4,pout=0.1"`` -> ``("planted", {...})``."""
    family, _, rest = spec.partition(":")
    if family not in _FAMILY_PARAMS:
        raise ConfigFailure(f"unknown family {family!r}; choose from {sorted(_FAMILY_PARAMS)}")
    types = _FAMILY_PARAMS[family]
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq or key not in types:
            raise ConfigFailure(f"bad generator parameter {item!r} for {family}")
        try:
            params[key] = types[key](value)
        except ValueError:
            raise ConfigFailure(f"bad value for {key}: {value!r}") from None
    return family, params


def _load_input(input_path, fmt, dataset, generate, seed, lcc) -> UndirectedGraph:
    given = [x is not None for x in (input_path, dataset, generate)]
    if sum(given) != 1:
        raise ConfigFailure("give exactly one of --input, --dataset, --generate")
    try:
        if input_path is not None:
            g = read_graph(input_path, fmt)
        elif dataset is not None:
            g = load_dataset(dataset)
        else:
            g = _generate(*parse_generator_spec(generate), seed)
    except (ParseError, UnicodeDecodeError) as exc:
        raise ParseFailure(str(exc)) from None
    except GraphInputError as exc:
        raise ParseFailure(str(exc)) from None
    except FileNotFoundError as exc:
        raise ParseFailure(str(exc)) from None
    if lcc and g.n:
        g, _ = largest_connected_component(g)
    if g.m == 0:
        raise ConfigFailure("graph has no edges")
    return g


def _input_options(f):
    options = [
        click.option("--input", "input_path", type=click.Path(dir_okay=False), help="Graph file."),
        click.option("--format", "fmt", type=click.Choice(["edgelist", "gml"]), default=None,
                     help="Input format (default: from suffix)."),
        click.option("--dataset", type=click.Choice(sorted(DATASETS)), default=None,
                     help="Named network instead of --input."),
        click.option("--generate", default=None, metavar="SPEC",
                     help="Generated graph, e.g. barbell:r=2,s=5 or planted:l=3,k=4,pin=0.4,pout=0.1."),
        click.option("--seed", type=int, default=None,
                     help=f"Generator seed (default {generators.DEFAULT_SEED})."),
        click.option("--lcc", is_flag=True, help="Keep only the largest connected component."),
        click.option("--epsilon", type=float, default=DEFAULT_EPSILON, show_default=True),
        click.option("--max-steps", type=int, default=None, help="Default: 20*sqrt(m)/epsilon, capped at 1e6."),
        click.option("--distance", type=click.Choice(["directed", "undirected"]), default="directed",
                     show_default=True, help="Vector on which the stopping distance is measured."),
        click.option("--initial", type=click.Choice(["max-degree", "uniform"]), default="max-degree",
                     show_default=True),
        click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None,
                     help="Write per-step averaged distributions (t,edge_index,pi_t)."),
        click.option("--out-csv", type=click.Path(dir_okay=False), default=None,
                     help="Write the limiting distribution (edge_index,u,v,probability)."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _walk(g, epsilon, max_steps, distance, initial, keep_trace):
    if max_steps is not None and max_steps < 1:
        raise ConfigFailure("--max-steps must be at least 1")
    if not epsilon > 0:
        raise ConfigFailure("--epsilon must be positive")
    try:
        return run_walk(g, epsilon, max_steps, initial=initial, distance=distance, keep_trace=keep_trace)
    except ConvergenceError as exc:
        raise ConvergenceFailure(str(exc)) from None


@click.group(context_settings={"auto_envvar_prefix": ENV_PREFIX, "help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Community detection with the Szegedy quantum walk."""


@main.command("generate")
@click.argument("family", type=click.Choice(sorted(_FAMILY_PARAMS)))
@click.option("--r", type=int, default=2, show_default=True, help="barbell: clique count")
@click.option("--s", type=int, default=5, show_default=True, help="barbell: clique size")
@click.option("--l", type=int, default=3, show_default=True, help="caveman/planted: group count")
@click.option("--k", type=int, default=5, show_default=True, help="caveman/planted: group size")
@click.option("--p", type=float, default=0.2, show_default=True, help="caveman: rewiring probability")
@click.option("--pin", type=float, default=0.4, show_default=True, help="planted: intra-group probability")
@click.option("--pout", type=float, default=0.1, show_default=True, help="planted: inter-group probability")
@click.option("--seed", type=int, default=None, help=f"Default {generators.DEFAULT_SEED}.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
def cmd_generate(family, r, s, l, k, p, pin, pout, seed, out):
    """Write a generated graph as an edge list."""
    g = _generate(family, {"r": r, "s": s, "l": l, "k": k, "p": p, "pin": pin, "pout": pout}, seed)
    if out is None:
        for u, v in g.edges:
            click.echo(f"{u} {v}")
    else:
        write_edge_list(g, out)
        click.echo(f"wrote {g.m} edges on {g.n} vertices to {out}", err=True)


@main.command("walk")
@_input_options
def cmd_walk(input_path, fmt, dataset, generate, seed, lcc, epsilon, max_steps, distance, initial,
             trace_path, out_csv):
    """Run the walk only and report the limiting edge distribution."""
    g = _load_input(input_path, fmt, dataset, generate, seed, lcc)
    outcome = _walk(g, epsilon, max_steps, distance, initial, trace_path is not None)
    if out_csv:
        write_distribution_csv(g, outcome.pi, out_csv)
    if trace_path:
        write_trace_csv(outcome.trace, trace_path)
    click.echo(f"graph: n={g.n} m={g.m}")
    click.echo(f"walk: T={outcome.steps} residual={outcome.residual:.3e} epsilon={outcome.epsilon:g}")
    if not out_csv:
        click.echo("edge_index,u,v,probability")
        for kk, (u, v) in enumerate(g.edges):
            click.echo(f"{kk},{u},{v},{outcome.pi[kk]:.12g}")


@main.command("detect")
@_input_options
@click.option("--q", type=float, default=None, help="Path-weight threshold (default 1/m).")
@click.option("--no-refine", is_flag=True, help="Skip the refinement pass.")
@click.option("--pi", "pi_path", type=click.Path(dir_okay=False), default=None,
              help="Use a distribution CSV from 'walk' instead of running the walk.")
@click.option("--out-json", type=click.Path(dir_okay=False), default=None)
@click.option("--out-dot", type=click.Path(dir_okay=False), default=None)
def cmd_detect(input_path, fmt, dataset, generate, seed, lcc, epsilon, max_steps, distance, initial,
               trace_path, out_csv, q, no_refine, pi_path, out_json, out_dot):
    """Run the full pipeline and print the communities."""
    g = _load_input(input_path, fmt, dataset, generate, seed, lcc)
    try:
        config = DetectionConfig(q=q, refine=not no_refine, epsilon=epsilon, max_steps=max_steps,
                                 distance=distance, initial=initial)
    except GraphInputError as exc:
        raise ConfigFailure(str(exc)) from None
    if pi_path is not None:
        try:
            pi = read_distribution_csv(pi_path)
        except (OSError, ValueError, KeyError) as exc:
            raise ParseFailure(f"{pi_path}: {exc}") from None
        if pi.shape != (g.m,):
            raise ConfigFailure(f"{pi_path} has {pi.size} edges, graph has {g.m}")
        outcome = None
    else:
        outcome = _walk(g, epsilon, max_steps, distance, initial, trace_path is not None)
        pi = outcome.pi
    result = detect_communities(g, pi, config)
    if outcome is not None:
        result = replace(result, walk=outcome)
        if trace_path:
            write_trace_csv(outcome.trace, trace_path)
    if out_csv:
        write_distribution_csv(g, pi, out_csv)
    doc = ResultDocument.from_result(g, result, config, seed)
    if outcome is None:
        doc.edge_probabilities = [float(x) for x in pi]
    if out_json:
        write_result(doc, out_json)
    if out_dot:
        write_dot(g, result.communities, out_dot)

    click.echo(f"graph: n={g.n} m={g.m}")
    if outcome is not None:
        click.echo(f"walk: T={outcome.steps} residual={outcome.residual:.3e} epsilon={outcome.epsilon:g}")
    click.echo(f"q: {result.q:.6g}")
    click.echo(f"communities: {len(doc.communities)} sizes={[len(c) for c in doc.communities]}")
    click.echo(f"coverage: {result.coverage:.4f}")
    for i, c in enumerate(doc.communities):
        members = " ".join(g.label(v) for v in c)
        click.echo(f"  C{i} ({len(c)}): {members}")


@main.command("plot-data")
@click.option("--trace", "trace_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--edges", default=None, help="Comma-separated edge indices (default: all).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
def cmd_plot_data(trace_path, edges, out):
    """Reshape a trace CSV into one column per edge (t,e0,e1,...)."""
    try:
        trace = read_trace_csv(trace_path)
    except (ParseError, ValueError) as exc:
        raise ParseFailure(str(exc)) from None
    try:
        cols = list(range(trace.shape[1])) if edges is None else [int(x) for x in edges.split(",") if x]
    except ValueError:
        raise ConfigFailure(f"--edges expects comma-separated integers, got {edges!r}") from None
    if any(not 0 <= c < trace.shape[1] for c in cols):
        raise ConfigFailure(f"edge index outside 0..{trace.shape[1] - 1}")
    lines = ["t," + ",".join(f"e{c}" for c in cols)]
    for t, row in enumerate(trace):
        lines.append(f"{t}," + ",".join(format(float(row[c]), ".12g") for c in cols))
    text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(argv=None) -> int:
    """Invoke the CLI and return its exit code instead of exiting."""
    try:
        main.main(args=argv, prog_name="szcommunity", standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
