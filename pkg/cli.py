#!/usr/bin/env python3
"""
dimred command line: compute, verify and example

    python cli.py compute data/hopf.json --degree 2 --degree 3
    python cli.py verify data/torus-nerve.json --checks lift --seed 7 --format json
    python cli.py example lens --k 5 > data/lens-5.json

Exit codes: 0 ok, 1 a verification failed, 2 invalid input or inapplicable
check, 3 the twist is not a cocycle.
"""

import logging
import sys

import click
import numpy as np
import pandas as pd

from brauer_formulas import (
    WLiftData,
    bockstein_of_g_triple,
    check_m_data,
    check_setup,
    check_tu_closure,
    check_triple,
    closure_plan,
    random_g,
    random_triple,
    surjectivity_cocycle,
    tudimred_witnesses,
)
from config import TOOL_VERSION, load_settings
from dimred_complex import (
    assemble_complex,
    assemble_two_column,
    column_filtration,
    connecting_cup_defects,
    d_f,
)
from errors import (
    ConfigError,
    DegreeOutOfRange,
    DimRedError,
    EmptyInput,
    InapplicableCheck,
    InvalidInstance,
    LengthMismatch,
    NonInteger,
    NotClosed,
    NotInNerve,
    TooLarge,
    UnknownExample,
)
from example_library import build_example
from homology import CheckReport, cohomology_group, coefficient_les_report, verify_exactness
from instance_io import dump_json, load_instance
from log_setup import configure_logging
from twist import steenrod_identity_defects
from tu_groupoid import run_tu_suite

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "dimred-report/1"
CHECKS = ("d2", "steenrod", "les", "tu", "surjectivity", "lift")
INPUT_ERRORS = (InvalidInstance, InapplicableCheck, UnknownExample, LengthMismatch,
                EmptyInput, NotInNerve, TooLarge, DegreeOutOfRange, ConfigError)


def _provenance(instance, seed):
    return {"input_sha256": instance.digest, "seed": seed, "tool_version": TOOL_VERSION}


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

def run_compute(instance, degrees, scalars, settings):
    if not degrees or min(degrees) < 0:
        raise DegreeOutOfRange(f"degrees must be a non-empty list of integers >= 0, "
                               f"got {list(degrees)}")
    kmax = max(degrees) + settings.kmax_margin
    complex_ = assemble_complex(instance.nerve, instance.twist, "Z", kmax)
    results = []
    for scalar in scalars:
        for k in degrees:
            group = cohomology_group(complex_, k, scalar)
            results.append({"degree": k, "coefficients": scalar, "group": group.to_json(),
                            "text": str(group)})
    return {
        "schema": REPORT_SCHEMA,
        "command": "compute",
        "instance": instance.name,
        "n": instance.twist.n,
        "nerve": {"counts": instance.nerve.counts()},
        "results": results,
        "provenance": _provenance(instance, settings.seed),
    }


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check_d2(instance, settings, rng):
    report = CheckReport("d2")
    kmax = 3 + settings.kmax_margin
    for complex_ in (assemble_complex(instance.nerve, instance.twist, "Z", kmax),
                     assemble_two_column(instance.nerve, instance.twist, "Z", kmax)):
        defects = complex_.square_defects()
        report.record(not defects, complex=complex_.name, matrix_degrees=defects)
        for k in range(complex_.top_degree):
            values = [int(v) for v in rng.integers(-3, 4, size=complex_.dim(k))]
            twice = d_f(d_f(complex_.from_vector(k, values, "Z"), instance.twist), instance.twist)
            report.record(not twice, complex=complex_.name, cochain_degree=k)
    return [report]


def _check_steenrod(instance, settings, rng):
    report = CheckReport("steenrod")
    defects = steenrod_identity_defects(instance.twist)
    report.checked = len(instance.nerve.simplices(4))
    for simplex, pair, lhs, rhs in defects:
        report.failures.append({"simplex": simplex, "pair": pair, "lhs": lhs, "rhs": rhs})
    return [report]


def _les_report(les):
    report = CheckReport(les.name)
    for node in les.nodes:
        report.record(node.exact, node=node.label, group=node.group, image=node.image,
                      kernel=node.kernel)
    report.notes["connecting_zero"] = {str(k): v for k, v in sorted(les.connecting_zero.items())}
    return report


def _check_les(instance, settings, rng):
    kmax = 3 + settings.kmax_margin
    three = assemble_complex(instance.nerve, instance.twist, "Z", kmax)
    two = assemble_two_column(instance.nerve, instance.twist, "Z", kmax)
    reports = [
        _les_report(verify_exactness(column_filtration(three), top=3)),
        _les_report(verify_exactness(column_filtration(two), top=3)),
        _les_report(coefficient_les_report(three, top=3)),
    ]
    cup = CheckReport("connecting map = u1 F")
    defects = connecting_cup_defects(two)
    cup.record(not defects, degrees=defects)
    reports.append(cup)
    return reports


def _check_tu(instance, settings, rng):
    if instance.has_groupoid:
        modulus = instance.raw["groupoid"].get("modulus", 2)
        return run_tu_suite(instance.groupoid_cases(), modulus, settings.cell_budget)
    return run_tu_suite(cell_budget=settings.cell_budget)


def _require_setup(instance, check):
    if not instance.has_setup:
        raise InapplicableCheck(f"check {check!r} needs a standard setup in the instance")


def _non_integer(name, exc):
    report = CheckReport(name)
    report.record(False, error="NonInteger", value=exc.value, message=str(exc))
    return report


def _check_surjectivity(instance, settings, rng):
    _require_setup(instance, "surjectivity")
    reports = []
    for _ in range(settings.random_triples):
        setup = instance.setup(rng)
        setup_report = check_setup(setup, instance.twist)
        reports.append(setup_report)
        if not setup_report.passed:
            break
        triple = random_triple(setup, instance.twist, rng)
        wdata = WLiftData(seed=int(rng.integers(2**31)))
        reports.append(check_triple(triple, setup, rng))
        reports.append(check_m_data(setup, wdata, rng, settings.samples))
        phi = surjectivity_cocycle(triple, setup, wdata)
        reports.append(check_tu_closure(phi, closure_plan(setup, rng, settings.samples)))
        _, _, identities = tudimred_witnesses(triple, setup, wdata, rng, max(settings.samples // 4, 1))
        reports.append(identities)
    return _merge_by_name(reports)


def _check_lift(instance, settings, rng):
    _require_setup(instance, "lift")
    report = CheckReport("lift_independence")
    for round_ in range(settings.random_triples):
        setup = instance.setup(rng)
        try:
            result = bockstein_of_g_triple(setup, random_g(setup, rng))
        except NonInteger as exc:
            return [_non_integer("lift_independence", exc)]
        report.record(result.all_zero, round=round_, nonzero=result.nonzero())
    if report.passed:
        report.notes["result"] = "all components zero"
    return [report]


def _merge_by_name(reports):
    merged = {}
    for report in reports:
        if report.name in merged:
            merged[report.name].merge(report)
        else:
            merged[report.name] = report
    return list(merged.values())


CHECK_RUNNERS = {
    "d2": _check_d2,
    "steenrod": _check_steenrod,
    "les": _check_les,
    "tu": _check_tu,
    "surjectivity": _check_surjectivity,
    "lift": _check_lift,
}


def run_verify(instance, checks, settings):
    unknown = [c for c in checks if c not in CHECK_RUNNERS]
    if unknown:
        raise InapplicableCheck(f"unknown checks: {', '.join(unknown)}")
    for check in checks:
        if check in ("surjectivity", "lift"):
            _require_setup(instance, check)

    rng = np.random.default_rng(settings.seed)
    results = []
    for check in checks:
        reports = CHECK_RUNNERS[check](instance, settings, rng)
        results.append({
            "check": check,
            "passed": all(r.passed for r in reports),
            "reports": [r.to_json() for r in reports],
        })
        logger.info("check finished", extra={"check": check, "passed": results[-1]["passed"]})
    return {
        "schema": REPORT_SCHEMA,
        "command": "verify",
        "instance": instance.name,
        "passed": all(r["passed"] for r in results),
        "checks": results,
        "provenance": _provenance(instance, settings.seed),
    }


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _print_compute(report):
    click.echo(f"\n🧮 DIMENSIONALLY REDUCED COHOMOLOGY: {report['instance']}")
    click.echo("=" * 60)
    click.echo(f"   Torus rank n: {report['n']}")
    click.echo(f"   Simplices per dimension: {report['nerve']['counts']}")
    table = pd.DataFrame(
        [{"degree": r["degree"], "coefficients": r["coefficients"], "group": r["text"]}
         for r in report["results"]]
    )
    click.echo("")
    click.echo(table.to_string(index=False))


def _print_verify(report):
    click.echo(f"\n🔍 VERIFICATION: {report['instance']}")
    click.echo("=" * 60)
    rows = []
    for check in report["checks"]:
        for r in check["reports"]:
            rows.append({"check": check["check"], "report": r["name"], "checked": r["checked"],
                         "failures": r["failure_count"], "passed": "✅" if r["passed"] else "❌"})
    click.echo(pd.DataFrame(rows).to_string(index=False))
    for check in report["checks"]:
        for r in check["reports"]:
            for failure in r["failures"][:5]:
                click.echo(f"❌ {r['name']}: {failure}")
    click.echo("")
    click.echo("✅ All checks passed" if report["passed"] else "❌ Some checks failed")


def _emit(report, fmt, printer):
    if fmt == "json":
        click.echo(dump_json(report))
    else:
        printer(report)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _fail(ctx, exc):
    if isinstance(exc, NotClosed):
        code = 3
    elif isinstance(exc, INPUT_ERRORS):
        code = 2
    else:
        code = 1
    logger.error("command failed", extra={"error": type(exc).__name__, "exit_code": code})
    click.echo(f"❌ {type(exc).__name__}: {exc}", err=True)
    ctx.exit(code)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML settings file")
@click.option("--log-level", default=None, help="Logging level (default from settings)")
@click.option("--log-format", type=click.Choice(["text", "json"]), default=None)
@click.pass_context
def cli(ctx, config_path, log_level, log_format):
    """Dimensionally reduced twisted Cech cohomology toolkit"""
    try:
        settings = load_settings(config_path).replace(log_level=log_level, log_format=log_format)
    except ConfigError as exc:
        _fail(ctx, exc)
    configure_logging(settings.log_level, settings.log_format)
    ctx.obj = settings


@cli.command()
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", "degrees", type=int, multiple=True, help="Degree k (repeatable)")
@click.option("--coeff", "scalars", type=click.Choice(["Z", "Q", "QZ"]), multiple=True)
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def compute(ctx, instance_path, degrees, scalars, seed, fmt):
    """Cohomology groups of an instance"""
    settings = ctx.obj.replace(seed=seed)
    try:
        instance = load_instance(instance_path)
        report = run_compute(instance, list(degrees) or instance.degrees,
                             list(scalars) or instance.coefficients, settings)
    except DimRedError as exc:
        _fail(ctx, exc)
    _emit(report, fmt, _print_compute)


@cli.command()
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--checks", default=",".join(CHECKS), show_default=True,
              help="Comma separated subset of " + ", ".join(CHECKS))
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def verify(ctx, instance_path, checks, seed, fmt):
    """Run verification suites; exit 1 when any check fails"""
    settings = ctx.obj.replace(seed=seed)
    try:
        instance = load_instance(instance_path)
        report = run_verify(instance, [c.strip() for c in checks.split(",") if c.strip()], settings)
    except DimRedError as exc:
        _fail(ctx, exc)
    _emit(report, fmt, _print_verify)
    if not report["passed"]:
        ctx.exit(1)


def run_example(name, k=None, euler=None):
    instance = build_example(name, k, euler)
    logger.info("built example", extra={"example": instance["name"]})
    return instance


def _parse_euler(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(int(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter("expected integers a,b") from None


@cli.command()
@click.argument("name")
@click.option("--k", type=int, default=None, help="Multiplier for lens and nilmanifold")
@click.option("--euler", callback=_parse_euler, default=None, help="Euler vector a,b")
@click.pass_context
def example(ctx, name, k, euler):
    """Emit the instance file of a worked example"""
    try:
        instance = run_example(name, k, euler)
    except DimRedError as exc:
        _fail(ctx, exc)
    click.echo(dump_json(instance))


if __name__ == "__main__":
    sys.exit(cli())
