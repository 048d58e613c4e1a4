"""Command-line surface.

Every pipeline stage is a subcommand; tables come from ``builtin:<name>``
(example1, water, raters) or from JSON/CSV files.  Exit codes: 0 success,
2 infeasible targets or empty polytope, 3 parse error, 4 domain error.
"""

from __future__ import annotations

import functools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import datasets
from .constraints import (
    DEFAULT_DIGITS,
    OBSERVED,
    UNIFORM,
    build_H,
    targets_from_pmf,
)
from .errors import (
    DomainError,
    EmptyFeasibleSetError,
    InfeasibleTargetsError,
    NotInPolytopeError,
    TableParseError,
)
from .geometry import (
    MixtureWeights,
    decompose as geometry_decompose,
    enumerate_vertices,
    extreme_rays,
    mixture as geometry_mixture,
    normalize,
    polytope_dimension,
)
from .io import (
    constraints_to_json_dict,
    document_to_json_dict,
    load_table,
    loglinear_to_json_dict,
    parse_rational,
    pmf_to_document,
    subset_key,
    targets_to_json_dict,
    vertexset_from_json,
    vertexset_to_json_dict,
)
from .ipf import DEFAULT_MAX_ITER, DEFAULT_TOL, ipf_max_entropy
from .loglinear import CORNER, DEFAULT_EPS, ZERO_MEAN, corner_params, zero_mean_params
from .sampling import SamplerConfig, sample_dirichlet, sample_hit_and_run
from .table import (
    FLOAT,
    RATIONAL,
    Pmf,
    all_pairs,
    conditional_odds_ratio,
    correlation,
    marginal_odds_ratio,
    top_order_odds_ratio,
    univariate_margin,
)

EXIT_INFEASIBLE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4


def _exit_on_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TableParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        except (InfeasibleTargetsError, EmptyFeasibleSetError, NotInPolytopeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INFEASIBLE)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DOMAIN)

    return wrapper


def _num(value):
    """JSON-safe number: floats stay floats, inf/nan become strings."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        if math.isnan(value):
            return "undefined"
        return value
    return float(value)


def _fmt(value, decimals=6):
    v = _num(value)
    return v if isinstance(v, str) else f"{v:.{decimals}f}".rstrip("0").rstrip(".")


def _load_pmf(source: str, precision_mode: str) -> Pmf:
    pmf = load_table(source).to_pmf()
    return pmf.to_float() if precision_mode == FLOAT else pmf


def _pair_key(pair):
    return f"{pair[0]}{pair[1]}"


_input_argument = click.argument("source", metavar="INPUT")
_json_flag = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")
_digits_option = click.option(
    "--digits", default=DEFAULT_DIGITS, show_default=True,
    help="Decimal precision at which moment targets are rationalized.",
)
_margins_option = click.option(
    "--margins", type=click.Choice([UNIFORM, OBSERVED]), default=UNIFORM, show_default=True,
    help="Target the uniform margins or the table's observed margins.",
)
_precision_option = click.option(
    "--precision-mode", type=click.Choice([RATIONAL, FLOAT]), default=RATIONAL,
    show_default=True, help="Arithmetic mode for table statistics.",
)


@click.group()
@click.version_option(package_name="bintab")
def main():
    """Characterize binary tables with fixed margins and pairwise dependence."""


@main.command()
@_input_argument
@_json_flag
@_precision_option
@_exit_on_errors
def analyze(source, as_json, precision_mode):
    """Margins, correlations, and all odds-ratio flavors of a table."""
    pmf = _load_pmf(source, precision_mode)
    d = pmf.d
    pairs = all_pairs(d)
    margins = {i: univariate_margin(pmf, i) for i in range(1, d + 1)}
    correlations = {pair: correlation(pmf, *pair) for pair in pairs}
    marginal = {pair: marginal_odds_ratio(pmf, *pair) for pair in pairs}
    conditional = {}
    for (i, j) in pairs:
        for offset in range(2 ** (d - 2)):
            rest = tuple((offset >> (d - 2 - 1 - b)) & 1 for b in range(d - 2)) if d > 2 else ()
            conditional[(i, j, rest)] = conditional_odds_ratio(pmf, i, j, rest)
    top = top_order_odds_ratio(pmf)

    if as_json:
        click.echo(json.dumps({
            "d": d,
            "cells": [float(c) for c in pmf.cells],
            "margins": {str(i): [_num(float(m)) for m in margins[i]] for i in margins},
            "correlations": {_pair_key(p): _num(correlations[p]) for p in pairs},
            "marginal_odds_ratios": {_pair_key(p): _num(marginal[p]) for p in pairs},
            "conditional_odds_ratios": {
                _pair_key((i, j)) + "|" + "".join(map(str, rest)): _num(v)
                for (i, j, rest), v in conditional.items()
            },
            "top_order_odds_ratio": _num(top),
        }, indent=2))
        return
    click.echo(f"d = {d}, cells = {len(pmf.cells)}" + (f", total count = {pmf.total}" if pmf.total else ""))
    click.echo("univariate margins (m0, m1):")
    for i in range(1, d + 1):
        m0, m1 = margins[i]
        click.echo(f"  axis {i}: ({_fmt(m0)}, {_fmt(m1)})")
    click.echo("pairwise statistics:")
    for pair in pairs:
        click.echo(
            f"  ({pair[0]},{pair[1]}): correlation = {_fmt(correlations[pair], 4)}, "
            f"marginal odds ratio = {_fmt(marginal[pair], 4)}"
        )
    click.echo("conditional odds ratios:")
    for (i, j, rest), v in conditional.items():
        rest_txt = "".join(map(str, rest)) if rest else "-"
        click.echo(f"  ({i},{j}) given rest={rest_txt}: {_fmt(v, 4)}")
    click.echo(f"top-order odds ratio: {_fmt(top, 6)}")


@main.command()
@_input_argument
@_json_flag
@_digits_option
@_margins_option
@_exit_on_errors
def targets(source, as_json, digits, margins):
    """Margin/moment targets derived from a table's odds ratios."""
    pmf = _load_pmf(source, RATIONAL)
    tgt = targets_from_pmf(pmf, digits=digits, margins=margins)
    if as_json:
        click.echo(json.dumps(targets_to_json_dict(tgt, digits), indent=2))
        return
    click.echo(f"margins mode: {margins}")
    for i, m in enumerate(tgt.univariate, start=1):
        click.echo(f"  m{i} = {m} ({_fmt(float(m))})")
    for (i, j), mu in tgt.moments.items():
        click.echo(f"  mu{i}{j} = {mu} ({_fmt(float(mu))})")


@main.command()
@_input_argument
@_json_flag
@_digits_option
@_margins_option
@_exit_on_errors
def constraints(source, as_json, digits, margins):
    """The margin/moment constraint matrix for a table's targets."""
    pmf = _load_pmf(source, RATIONAL)
    H = build_H(targets_from_pmf(pmf, digits=digits, margins=margins))
    if as_json:
        click.echo(json.dumps(constraints_to_json_dict(H), indent=2))
        return
    click.echo(f"{H.n_rows} x {H.n_cols} constraint matrix")
    for label, row in zip(H.labels, H.rows):
        name = f"{label[0]} {''.join(str(v) for v in label[1:])}"
        click.echo(f"  {name:>12}: " + " ".join(str(v) for v in row))


@main.command()
@_input_argument
@_json_flag
@_digits_option
@_margins_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the vertex set JSON here.")
@click.option("--threads", default=1, show_default=True, help="Worker threads for enumeration.")
@_precision_option
@_exit_on_errors
def vertices(source, as_json, digits, margins, output, threads, precision_mode):
    """Enumerate the extreme pmfs of the feasible polytope."""
    if precision_mode != RATIONAL:
        raise DomainError("vertex enumeration runs in exact rational arithmetic only")
    pmf = _load_pmf(source, RATIONAL)
    tgt = targets_from_pmf(pmf, digits=digits, margins=margins)
    H = build_H(tgt)
    rays = extreme_rays(H, threads=threads)
    if not rays.rays:
        raise EmptyFeasibleSetError(
            "the feasible polytope is empty", certificate=rays.empty_certificate
        )
    V = normalize(rays)
    dim = polytope_dimension(H)
    payload = vertexset_to_json_dict(V, digits=max(digits, 6))
    payload["dimension"] = dim
    if output:
        Path(output).write_text(json.dumps(payload, indent=2, ensure_ascii=False))
    if as_json:
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        click.echo(f"n = {len(V.vertices)} extreme pmfs, polytope dimension {dim}")
        for idx, v in enumerate(V.vertices, start=1):
            click.echo(f"  r{idx}: " + " ".join(_fmt(float(c), max(3, digits)) for c in v.cells))
        if output:
            click.echo(f"wrote {output}")


@main.command()
@click.argument("vertex_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--weights", required=True, help="Comma-separated weights, e.g. '1/2,1/2' or '0.3,0.7'.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the mixed table JSON here.")
@_json_flag
@_exit_on_errors
def mixture(vertex_file, weights, output, as_json):
    """Convex combination of an enumerated vertex set."""
    V = vertexset_from_json(Path(vertex_file).read_text())
    theta = MixtureWeights(tuple(parse_rational(w) for w in weights.split(",")))
    mixed = geometry_mixture(theta, V)
    doc = document_to_json_dict(pmf_to_document(mixed))
    text = json.dumps(doc, indent=2)
    if output:
        Path(output).write_text(text)
        if not as_json:
            click.echo(f"wrote {output}")
    if as_json or not output:
        click.echo(text)


@main.command()
@click.argument("vertex_file", type=click.Path(exists=True, dir_okay=False))
@_input_argument
@click.option("--tol", default=1e-9, show_default=True, help="Max-norm membership tolerance.")
@_exit_on_errors
def decompose(vertex_file, source, tol):
    """Mixture weights representing a table over a vertex set."""
    V = vertexset_from_json(Path(vertex_file).read_text())
    pmf = _load_pmf(source, RATIONAL)
    weights = geometry_decompose(pmf, V, tol=tol)
    click.echo(json.dumps({
        "weights": [_num(float(t)) for t in weights.theta],
        "exact": [str(t) for t in weights.theta],
    }, indent=2))


@main.command()
@_input_argument
@click.option(
    "--parametrization", type=click.Choice([ZERO_MEAN, CORNER]), default=ZERO_MEAN,
    show_default=True,
)
@click.option("--eps", default=DEFAULT_EPS, show_default=True, help="Smoothing added to each cell before logs.")
@_json_flag
@_precision_option
@_exit_on_errors
def loglinear(source, parametrization, eps, as_json, precision_mode):
    """Saturated log-linear coefficients of a table."""
    pmf = _load_pmf(source, precision_mode)
    params = (
        zero_mean_params(pmf, eps=eps)
        if parametrization == ZERO_MEAN
        else corner_params(pmf, eps=eps)
    )
    if as_json:
        click.echo(json.dumps(loglinear_to_json_dict(params), indent=2, ensure_ascii=False))
        return
    click.echo(f"parametrization: {parametrization} (eps = {eps})")
    for subset in sorted(params.coefficients, key=lambda s: (len(s), s)):
        click.echo(f"  lambda[{subset_key(subset)}] = {params.coefficients[subset]:+.4f}")


@main.command()
@_input_argument
@click.option(
    "--method", type=click.Choice(["dirichlet", "hitrun"]), default="dirichlet",
    show_default=True,
)
@click.option("--count", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--burn-in", default=500, show_default=True)
@click.option("--thinning", default=10, show_default=True)
@_digits_option
@_margins_option
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write JSON-lines here instead of stdout.")
@_exit_on_errors
def sample(source, method, count, seed, burn_in, thinning, digits, margins, output):
    """Draw feasible pmfs (JSON-lines: one header record, then one pmf per line)."""
    pmf = _load_pmf(source, RATIONAL)
    tgt = targets_from_pmf(pmf, digits=digits, margins=margins)
    H = build_H(tgt)
    V = enumerate_vertices(H)
    if not V.vertices:
        raise EmptyFeasibleSetError("the feasible polytope is empty")
    cfg = SamplerConfig(seed=seed, count=count, burn_in=burn_in, thinning=thinning)
    if method == "dirichlet":
        draws = sample_dirichlet(V, cfg)
    else:
        centroid = geometry_mixture(
            MixtureWeights(tuple(Fraction(1, len(V.vertices)) for _ in V.vertices)), V
        )
        draws = sample_hit_and_run(H, centroid, cfg)
    lines = [json.dumps({
        "method": method, "seed": seed, "count": count,
        "burn_in": burn_in, "thinning": thinning, "d": pmf.d,
    })]
    lines.extend(json.dumps({"cells": [float(c) for c in draw.cells]}) for draw in draws)
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text)
        click.echo(f"wrote {count} draws to {output}")
    else:
        click.echo(text, nl=False)


@main.command()
@_input_argument
@_json_flag
@_digits_option
@_margins_option
@click.option("--tol", default=DEFAULT_TOL, show_default=True)
@click.option("--max-iter", default=DEFAULT_MAX_ITER, show_default=True)
@_exit_on_errors
def ipf(source, as_json, digits, margins, tol, max_iter):
    """Maximum-entropy table for a table's targets, via proportional fitting."""
    pmf = _load_pmf(source, RATIONAL)
    tgt = targets_from_pmf(pmf, digits=digits, margins=margins)
    report = ipf_max_entropy(tgt, tol=tol, max_iter=max_iter)
    top = top_order_odds_ratio(report.table)
    if as_json:
        click.echo(json.dumps({
            "converged": report.converged,
            "iterations": report.iterations,
            "final_residual": report.final_residual,
            "top_order_odds_ratio": _num(top),
            "cells": [float(c) for c in report.table.cells],
        }, indent=2))
        return
    status = "converged" if report.converged else "did NOT converge"
    click.echo(f"IPF {status} after {report.iterations} sweeps (residual {report.final_residual:.2e})")
    click.echo("cells: " + " ".join(_fmt(c) for c in report.table.cells))
    click.echo(f"top-order odds ratio: {_fmt(top)}")


@main.command()
@click.argument("example", type=click.Choice(list(datasets.BUILTIN_NAMES)))
@_json_flag
@_exit_on_errors
def reproduce(example, as_json):
    """Recompute a built-in case study and compare with its published values."""
    from .reproduce import reproduce_report

    report = reproduce_report(example)
    if as_json:
        click.echo(json.dumps(report, indent=2, ensure_ascii=False))
        return
    for section in report["sections"]:
        click.echo(section["title"])
        header = section.get("header")
        if header:
            click.echo("  " + header)
        for line in section["lines"]:
            click.echo("  " + line)
        click.echo("")
    click.echo(f"max |deviation| across all compared entries: {report['max_deviation']:.3e}")


if __name__ == "__main__":
    main()
