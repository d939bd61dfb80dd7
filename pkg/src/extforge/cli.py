"""The ext-forge command line.

Exit codes: 0 = success (certificate or statement emitted, chart written),
2 = theorem hypotheses unmet, 3 = an internal theorem check failed.
"""

from __future__ import annotations

import json
import sys

import click

from . import charts as chartmod
from .arith2 import alpha
from .axial import TheoremCheckError, UnitSeries, axial_decompose, invert_unit, solve_theta
from .certify import HypothesisNotMet, certify_h1, emit_statement, statement_dimensions
from .fdmodule import verify_action
from .modlang import build_module, expr_bounds, parse_module_expr
from .resolution import ext_chart, minimal_resolution, stable_window
from .steenrod import algebra

_PROFILES = {"A0": 0, "A1": 1, "A2": 2}


def _fail_theorem(e: Exception):
    click.echo("theorem check failed: %s" % e, err=True)
    sys.exit(3)


@click.group()
def main():
    """Ext charts over A(n) and nonimmersion certificates."""


@main.command()
@click.option("--algebra", "algebra_name", type=click.Choice(sorted(_PROFILES)), default="A2", show_default=True)
@click.option("--module", "module_expr", required=True, help="module expression, e.g. 'tensor(P[-3..],P[3..])'")
@click.option("--max-s", type=int, required=True)
@click.option("--max-t", type=int, required=True)
@click.option("--stems", default=None, help="trusted stem range LO:HI (needed for modules unbounded below)")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write chart JSON here")
@click.option("--skip-verify", is_flag=True, help="skip the module action verification")
def resolve(algebra_name, module_expr, max_s, max_t, stems, out, skip_verify):
    """Compute a minimal resolution and write its Ext chart."""
    profile = _PROFILES[algebra_name]
    expr = parse_module_expr(module_expr)
    bounds = expr_bounds(expr)
    trusted = None
    if stems:
        lo_s, hi_s = stems.split(":")
        trusted = (int(lo_s), int(hi_s))
    if bounds[0] is None and trusted is None:
        click.echo("module is unbounded below; pass --stems LO:HI for the trusted range", err=True)
        sys.exit(2)
    window = stable_window(bounds, max_s, max_t, trusted or (bounds[0], max_t - max_s), profile)
    m = build_module(expr, profile, window)
    if not skip_verify:
        rep = verify_action(m)
        if not rep.passed:
            _fail_theorem(AssertionError("module action verification failed: %r" % (rep.first_failure(),)))
    res = minimal_resolution(m, max_s, max_t)
    stem_min = trusted[0] if trusted else m.min_degree
    stem_max = min(trusted[1] if trusted else max_t - max_s, max_t - max_s)
    chart = ext_chart(res, module_name=str(expr), stem_min=stem_min, stem_max=stem_max)
    if out:
        chartmod.save_chart(chart, out)
        click.echo("wrote %s (%d entries, %d lines)" % (out, len(chart.entries), len(chart.lines)))
    else:
        click.echo(chartmod.render(chart, "ascii"))


@main.group()
def chart():
    """Render or diff chart JSON files."""


@chart.command("render")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["ascii", "svg"]), default="ascii", show_default=True)
def chart_render(path, fmt):
    """Draw a chart from its JSON file."""
    click.echo(chartmod.render(chartmod.load_chart(path), fmt), nl=False)


@chart.command("diff")
@click.argument("computed", type=click.Path(exists=True, dir_okay=False))
@click.argument("expected", type=click.Path(exists=True, dir_okay=False))
def chart_diff(computed, expected):
    """Compare two charts on the overlap of their regions."""
    got = chartmod.load_chart(computed)
    try:
        want = chartmod.load_fixture(expected)
    except KeyError:
        want = chartmod.load_chart(expected)
    report = chartmod.compare(got, want)
    click.echo(report.summary())
    if not report.clean:
        sys.exit(1)


@main.group()
def axial():
    """The p-series engine behind the axial class."""


def _int_list(text):
    return [int(x) for x in text.split(",")] if text else []


@axial.command("theta")
@click.option("--gammas", default="", help="comma-separated gamma_1, gamma_2, ...")
@click.option("--j", "--J", "j_trunc", type=int, default=16, show_default=True)
@click.option("--k", "--K", "k_prec", type=int, default=32, show_default=True)
@click.option("--leading", type=int, default=16, show_default=True)
def axial_theta(gammas, j_trunc, k_prec, leading):
    """Solve the c4 fixed-point series and print coefficient valuations."""
    try:
        theta = solve_theta(_int_list(gammas), J=j_trunc, K=k_prec, leading=leading)
    except TheoremCheckError as e:
        _fail_theorem(e)
    payload = {
        "J": j_trunc,
        "K": k_prec,
        "coefficients": {
            str(j): {"value": c.value, "nu": c.valuation, "nu_exact": c.valuation_is_exact}
            for j, c in sorted(theta.coefficients.items())
        },
    }
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


@axial.command("decompose")
@click.option("--kappas", default="", help="comma-separated kappa_1, kappa_2, ...")
@click.option("--gammas", default="", help="comma-separated gamma_1, gamma_2, ...")
@click.option("--j", "--J", "j_trunc", type=int, default=16, show_default=True)
@click.option("--k", "--K", "k_prec", type=int, default=32, show_default=True)
@click.option("--invert", is_flag=True, help="also invert the unit and check the product")
def axial_decompose_cmd(kappas, gammas, j_trunc, k_prec, invert):
    """Decompose the axial class as (X1 + X2) times a unit series."""
    try:
        unit = axial_decompose(_int_list(kappas), _int_list(gammas), J=j_trunc, K=k_prec)
        payload = {
            "u": {"value": unit.u.value, "odd": unit.u.is_odd},
            "alphas": [
                {"index": j, "value": a.value, "nu": a.valuation, "nu_exact": a.valuation_is_exact}
                for j, a in enumerate(unit.alphas, start=1)
            ],
        }
        if invert:
            inv = invert_unit(unit, J=j_trunc)
            payload["inverse"] = {
                "u": inv.u.value,
                "alphas": [a.value for a in inv.alphas],
            }
    except TheoremCheckError as e:
        _fail_theorem(e)
    click.echo(json.dumps(payload, indent=1, sort_keys=True))


@main.group(invoke_without_command=True)
@click.option("--m", "--M", "m_val", type=int, default=None)
@click.option("--h", "h_val", type=int, default=1, show_default=True)
@click.option("--variant", type=click.Choice(["a", "b"]), default=None, help="force a statement variant (h = 1)")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def certify(ctx, m_val, h_val, variant, json_out):
    """Emit a nonimmersion certificate for one (M, h)."""
    if ctx.invoked_subcommand is not None:
        return
    if m_val is None:
        click.echo("certify needs --M (or use 'certify table')", err=True)
        sys.exit(2)
    try:
        if variant is not None and h_val == 1:
            cert = certify_h1(m_val, variant)
        else:
            cert = emit_statement(m_val, h_val)
    except HypothesisNotMet as e:
        click.echo("rejected: %s" % e, err=True)
        sys.exit(2)
    except TheoremCheckError as e:
        _fail_theorem(e)
    if json_out:
        from pathlib import Path

        Path(json_out).write_text(json.dumps(cert.to_dict(), indent=1, sort_keys=True) + "\n")
    click.echo("%s  [%s]" % (cert.statement(), cert.verdict))
    if cert.witness:
        click.echo(
            "witness: X1^%d X2^%d with nu = %d < order exponent %d (%s)"
            % (
                cert.witness["monomial"][0],
                cert.witness["monomial"][1],
                cert.witness["nu"],
                cert.witness["order_exponent"],
                cert.witness["provenance"],
            )
        )


@certify.command("table")
@click.option("--h", "h_val", type=int, default=1, show_default=True)
@click.option("--max-m", "--max-M", "max_m", type=int, default=1024, show_default=True)
def certify_table(h_val, max_m):
    """List every M below the bound satisfying the alpha hypotheses."""
    pow2 = 1
    if h_val > 1:
        pow2 = 1
        while pow2 < h_val:
            pow2 *= 2
    rows = 0
    for m_val in range(0, max_m + 1):
        if h_val > 1 and m_val % pow2:
            continue
        try:
            variant, space, euclid = statement_dimensions(m_val, h_val)
        except HypothesisNotMet:
            continue
        click.echo(
            "M=%-5d alpha=%d variant %s: P^%d not in R^%d" % (m_val, alpha(m_val), variant, space, euclid)
        )
        rows += 1
    click.echo("%d applicable values of M <= %d for h = %d" % (rows, max_m, h_val))


@main.command("module")
@click.argument("action", type=click.Choice(["info"]))
@click.argument("module_expr")
@click.option("--algebra", "algebra_name", type=click.Choice(sorted(_PROFILES)), default="A2", show_default=True)
@click.option("--window", default=None, help="LO:HI window for semi-infinite expressions")
def module_cmd(action, module_expr, algebra_name, window):
    """Diagnostics for a module expression (dimension census, action check)."""
    profile = _PROFILES[algebra_name]
    alg = algebra(profile)
    expr = parse_module_expr(module_expr)
    win = None
    if window:
        lo_s, hi_s = window.split(":")
        win = (int(lo_s), int(hi_s))
    m = build_module(expr, profile, win)
    click.echo("%s over A(%d): dim %d, degrees [%s, %s]" % (expr, profile, m.dim, m.min_degree, m.max_degree))
    click.echo("algebra A(%d): dim %d, top degree %d" % (profile, alg.dim, alg.top_degree))
    by_deg = {}
    for d in m.degrees_present():
        by_deg[d] = m.dim_at(d)
    click.echo("dims by degree: %s" % json.dumps(by_deg, sort_keys=True))
    rep = verify_action(m)
    if rep.passed:
        click.echo("action verified on %d (generator, basis) pairs" % rep.checked_pairs)
    else:
        click.echo("ACTION INVALID; first failure: %r" % (rep.first_failure(),))
        sys.exit(3)


if __name__ == "__main__":
    main()
