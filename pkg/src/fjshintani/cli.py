"""Command line entry point: ``fjshintani eval | table | verify``.

Exit codes: 0 on success, 1 on a verification failure or a domain error
(for instance a cocharacter outside the negative cone), 2 on a usage error.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from .algebra import DEFAULT_TRIALS, SingularEvaluation
from .lfactors import FactorError
from .rootdata import Cocharacter, RootDataError, build_case
from .verify import (
    SUITES,
    EvalRequest,
    SuiteConfig,
    SuiteError,
    eval_ws,
    lambda_grid,
    parse_int_vector,
    parse_vector,
    request_from_dict,
    run_suite,
    table_ws,
)
from .wsformula import FormulaError

DOMAIN_ERRORS = (RootDataError, FactorError, FormulaError, SingularEvaluation, ZeroDivisionError)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _fraction_or_none(text: str | None, what: str) -> Fraction | None:
    if text is None or text.strip().lower() == "symbolic":
        return None
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational number: {text!r}", param_hint=what) from None


def _vector_or_none(text: str | None, what: str) -> tuple | None:
    try:
        vec = parse_vector(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"expected comma-separated rationals, got {text!r}", param_hint=what) from None
    return None if vec is None else tuple(vec)


def _int_vector(text: str | None, what: str) -> list[int]:
    try:
        return parse_int_vector(text)
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint=what) from None


def _case(kind: str | None, n: int | None, m: int | None):
    if kind is None or n is None or m is None:
        raise click.UsageError("--case, --n and --m are required")
    try:
        return build_case(kind, n, m)
    except RootDataError as exc:
        raise click.UsageError(str(exc)) from None


case_options = [
    click.option("--case", "kind", type=click.Choice(["split", "inert"]), help="Field extension type."),
    click.option("--n", type=int, help="Dimension of V."),
    click.option("--m", type=int, help="Dimension of W (n - m even and non-negative)."),
    click.option("--chi", default=None, help="Comma-separated values of chi, or 'symbolic'."),
    click.option("--eta", default=None, help="Comma-separated values of eta, or 'symbolic'."),
    click.option("--mu-unit", default=None, help="Value of mu at the uniformizer (split case only)."),
    click.option("--q", default=None, help="Residue field size; v is its square root."),
    click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="Output format."),
]


def with_case_options(fn):
    for opt in reversed(case_options):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Evaluate the closed Whittaker-Shintani formula and run identity suites."""


@main.command("eval")
@with_case_options
@click.option("--lambda-v", default=None, help="Comma-separated dominant V-part of lambda.")
@click.option("--lambda-w", default=None, help="Comma-separated antidominant W-part of lambda.")
@click.option("--input", "input_file", type=click.File("r"), default=None, help="Schema-1 JSON request ('-' for stdin).")
def eval_command(kind, n, m, chi, eta, mu_unit, q, fmt, lambda_v, lambda_w, input_file) -> None:
    """Print the canonical form (and optional numeric value) at one cocharacter."""
    if input_file is not None:
        try:
            doc = json.load(input_file)
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"malformed JSON input: {exc}") from None
        if not isinstance(doc, dict):
            raise click.UsageError("the JSON input must be an object")
        try:
            req = request_from_dict(doc)
        except (SuiteError, ValueError, TypeError) as exc:
            raise click.UsageError(f"malformed input: {exc}") from None
    else:
        case = _case(kind, n, m)
        lam = Cocharacter.of(_int_vector(lambda_v, "--lambda-v"), _int_vector(lambda_w, "--lambda-w"))
        req = EvalRequest(
            case, lam,
            _vector_or_none(chi, "--chi"), _vector_or_none(eta, "--eta"),
            _fraction_or_none(mu_unit, "--mu-unit"), _fraction_or_none(q, "--q"),
        )
    try:
        out = eval_ws(req)
    except SuiteError as exc:
        raise click.UsageError(str(exc)) from None
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    if fmt == "csv":
        click.echo(table_ws(req.case, [req.lam], req.chi, req.eta, req.mu_unit, req.q), nl=False)
    else:
        click.echo(json.dumps(out, indent=2, sort_keys=True))


@main.command("table")
@with_case_options
@click.option("--point", "points", multiple=True, help="One cocharacter as 'lambda_v;lambda_w', e.g. '1,0;0,-1'.")
@click.option("--max-norm", type=int, default=None, help="Use every cocharacter with entries in [-N, N].")
def table_command(kind, n, m, chi, eta, mu_unit, q, fmt, points, max_norm) -> None:
    """Print a CSV table (or JSON list) over a grid of cocharacters."""
    case = _case(kind, n, m)
    lambdas = []
    for p in points:
        if ";" not in p:
            raise click.BadParameter(f"expected 'lambda_v;lambda_w', got {p!r}", param_hint="--point")
        lv, lw = p.split(";", 1)
        lambdas.append(Cocharacter.of(_int_vector(lv, "--point"), _int_vector(lw, "--point")))
    if max_norm is not None:
        if max_norm < 0:
            raise click.BadParameter("must be non-negative", param_hint="--max-norm")
        lambdas.extend(lambda_grid(case, max_norm))
    args = (_vector_or_none(chi, "--chi"), _vector_or_none(eta, "--eta"),
            _fraction_or_none(mu_unit, "--mu-unit"), _fraction_or_none(q, "--q"))
    try:
        if fmt == "json":
            rows = [eval_ws(EvalRequest(case, lam, *args)) for lam in lambdas]
            click.echo(json.dumps({"schema": 1, "rows": rows}, indent=2, sort_keys=True))
        else:
            click.echo(table_ws(case, lambdas, *args), nl=False)
    except SuiteError as exc:
        raise click.UsageError(str(exc)) from None
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))


@main.command("verify")
@click.option("--suite", "suite", default="all", help=f"One of {', '.join(SUITES)}, or all.")
@click.option("--mode", type=click.Choice(["symbolic", "modular", "auto"]), default="auto",
              help="Exact comparison, random prime-field points, or chosen per case by cost.")
@click.option("--trials", type=click.IntRange(min=1), default=DEFAULT_TRIALS, help="Points per modular check.")
@click.option("--seed", type=int, default=0, help="Seed for modular points and sampled cocharacters.")
@click.option("--max-rank", type=click.IntRange(min=1), default=None, help="Skip cases of larger rank.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", help="Report format.")
@click.option("--timing/--no-timing", default=False, help="Include wall-clock times (breaks byte determinism).")
def verify_command(suite, mode, trials, seed, max_rank, fmt, timing) -> None:
    """Run a named identity suite and print its report; exit 1 if any check fails."""
    if suite != "all" and suite not in SUITES:
        raise click.BadParameter(f"unknown suite {suite!r}", param_hint="--suite")
    report = run_suite(suite, SuiteConfig(mode=mode, trials=trials, seed=seed, max_rank=max_rank))
    if fmt == "json":
        click.echo(report.to_json(include_timing=timing))
    else:
        click.echo(report_csv(report, timing), nl=False)
    sys.exit(0 if report.passed else 1)


def report_csv(report, timing: bool = False) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["suite", "case", "check", "status", "lhs", "rhs", "detail"]
    writer.writerow(header + (["seconds"] if timing else []))
    for c in report.checks:
        row = [report.suite_name, c.case, c.name, c.status, c.lhs, c.rhs, c.detail]
        writer.writerow(row + ([f"{c.seconds:.3f}"] if timing else []))
    return buf.getvalue()


if __name__ == "__main__":
    main()
