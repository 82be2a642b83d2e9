"""
Command-line entry point.

    python -m app.main gamma --seq tm --n-max 32 --format csv

Rows go to stdout, logs to stderr. Exit status is 0 on success, 1 when a
produced or supplied set fails verification and 2 on usage errors.
"""

from __future__ import annotations

import functools
import io
import logging
from typing import Callable, List, Optional, Sequence

import click
from pydantic import ValidationError

from .core.attractor import is_attractor
from .core.errors import AttractorError, FamilyNotApplicableError, VerificationError
from .core.families import family_for, pd_family, pd_maxspan_closed, pd_minspan_closed
from .core.greedy import greedy_attractor
from .core.log_setup import install_logging
from .core.recurrence import (
    appearance_profile,
    classify_growth,
    default_profile_length,
    dyadic_attractor,
    recurrence_profile,
    recurrent_construction,
    stride_attractor,
    windowed,
)
from .core.sequences import parse_sequence_spec, prefix
from .core.solver_metrics import get_solver_metrics
from .schemas.rows import (
    ClassifyRow,
    ConstructionRow,
    FamilyRow,
    GammaRow,
    GreedyRow,
    OutputRow,
    ProfileRow,
    SpanRow,
    VerdictRow,
    format_positions,
    format_rational,
)
from .services.gamma_sweep import gamma_table
from .services.reporting import FORMATS, write_rows

logger = logging.getLogger(__name__)

DEFAULT_CLASSIFY_POINTS = "64,128,256,512,1024,2048,4096"

seq_option = click.option(
    "--seq",
    "seq_text",
    default="tm",
    show_default=True,
    help="Builtin name (tm, pd, vtm, trib, pow2, fib), morphism:<rules> or dfao:<path>.",
)
format_option = click.option("--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True)
timeout_option = click.option(
    "--timeout-ms", type=click.IntRange(min=1), default=None, help="Per-instance solver budget (default SOLVER_TIMEOUT_SECONDS)."
)
n_option = click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Single prefix length.")
n_max_option = click.option("--n-max", type=click.IntRange(min=1), default=None, help="Sweep n_min..n_max.")
n_min_option = click.option("--n-min", type=click.IntRange(min=1), default=1, show_default=True)
threads_option = click.option(
    "--threads", type=click.IntRange(min=1), default=None, help="Worker processes (default SOLVER_THREADS)."
)


def _handled(func: Callable) -> Callable:
    """Map domain errors onto exit codes: verification failures 1, bad input 2."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except VerificationError as exc:
            click.echo(f"verification failed: {exc}", err=True)
            raise click.exceptions.Exit(1)
        except (AttractorError, ValidationError) as exc:
            raise click.UsageError(str(exc))

    return wrapper


def _emit(rows: Sequence[OutputRow], fmt: str) -> None:
    buffer = io.StringIO()
    write_rows(rows, fmt, buffer)
    click.echo(buffer.getvalue(), nl=False)


def _seconds(timeout_ms: Optional[int]) -> Optional[float]:
    return None if timeout_ms is None else timeout_ms / 1000.0


def _lengths(n: Optional[int], n_max: Optional[int], n_min: int) -> List[int]:
    if n is not None:
        return [n]
    if n_max is None:
        raise click.UsageError("give --n or --n-max")
    return list(range(n_min, n_max + 1))


def _parse_positions(text: str, option: str = "--set") -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint=option) from None


def _profile_length(window: int, max_length: Optional[int]) -> int:
    return max_length if max_length is not None else default_profile_length(window)


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Overrides LOG_LEVEL.",
)
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """String attractors of automatic and morphic sequences."""
    install_logging(log_level)
    ctx.call_on_close(lambda: logger.debug("[cli] solver metrics %s", get_solver_metrics()))


@cli.command()
@seq_option
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@_handled
def gen(seq_text: str, n: int) -> None:
    """Print the length-n prefix."""
    click.echo(str(prefix(parse_sequence_spec(seq_text), n)))


@cli.command()
@seq_option
@n_max_option
@n_min_option
@click.option("--spans", is_flag=True, help="Fill minspan/maxspan.")
@click.option("--delta", "with_delta", is_flag=True, help="Fill delta_num/delta_den.")
@click.option("--greedy", "with_greedy", is_flag=True, help="Fill greedy_size.")
@threads_option
@timeout_option
@format_option
@_handled
def gamma(
    seq_text: str,
    n_max: Optional[int],
    n_min: int,
    spans: bool,
    with_delta: bool,
    with_greedy: bool,
    threads: Optional[int],
    timeout_ms: Optional[int],
    fmt: str,
) -> None:
    """Exact gamma for every prefix length in n_min..n_max."""
    if n_max is None:
        raise click.UsageError("--n-max is required")
    fields = [name for name, wanted in (("spans", spans), ("delta", with_delta), ("greedy", with_greedy)) if wanted]
    records = gamma_table(
        parse_sequence_spec(seq_text),
        n_max,
        fields=fields,
        threads=threads,
        timeout_seconds=_seconds(timeout_ms),
        n_min=n_min,
    )
    _emit([GammaRow.from_record(record) for record in records], fmt)


@cli.command()
@seq_option
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--set", "set_text", required=True, help="Comma-separated positions, e.g. 7,15.")
@format_option
@_handled
def verify(seq_text: str, n: int, set_text: str, fmt: str) -> None:
    """Check a position set against the length-n prefix."""
    positions = _parse_positions(set_text)
    verdict = is_attractor(prefix(parse_sequence_spec(seq_text), n), positions, label="cli")
    _emit(
        [
            VerdictRow(
                seq=seq_text,
                n=n,
                positions=format_positions(sorted(set(positions))),
                ok=verdict.ok,
                failing_start=verdict.failing.start if verdict.failing else None,
                failing_length=verdict.failing.length if verdict.failing else None,
            )
        ],
        fmt,
    )
    if not verdict.ok:
        raise click.exceptions.Exit(1)


@cli.command()
@seq_option
@n_option
@n_max_option
@n_min_option
@format_option
@_handled
def greedy(seq_text: str, n: Optional[int], n_max: Optional[int], n_min: int, fmt: str) -> None:
    """Greedy attractor of each prefix, verified before it is printed."""
    spec = parse_sequence_spec(seq_text)
    rows = []
    for length in _lengths(n, n_max, n_min):
        result = greedy_attractor(spec, length)
        rows.append(
            GreedyRow(seq=seq_text, n=length, size=len(result), positions=format_positions(result.positions), verified=True)
        )
    _emit(rows, fmt)


@cli.command()
@seq_option
@n_option
@n_max_option
@n_min_option
@click.option("--literal", is_flag=True, help="pd only: evaluate the printed interval reading.")
@format_option
@_handled
def family(
    seq_text: str, n: Optional[int], n_max: Optional[int], n_min: int, literal: bool, fmt: str
) -> None:
    """Closed-form family set and its verdict."""
    if literal and seq_text != "pd":
        raise click.UsageError("--literal only applies to --seq pd")
    rows = []
    for length in _lengths(n, n_max, n_min):
        try:
            result = pd_family(length, literal=True) if literal else family_for(seq_text, length)
        except FamilyNotApplicableError:
            if n is not None:
                raise
            continue
        rows.append(FamilyRow.from_result(result))
    _emit(rows, fmt)
    if any(row.applicable and not row.verified for row in rows):
        raise click.exceptions.Exit(1)

@cli.command()
@seq_option
@n_option
@n_max_option
@n_min_option
@threads_option
@timeout_option
@format_option
@_handled
def span(
    seq_text: str,
    n: Optional[int],
    n_max: Optional[int],
    n_min: int,
    threads: Optional[int],
    timeout_ms: Optional[int],
    fmt: str,
) -> None:
    """minspan / maxspan over minimum attractors; pd rows carry the closed forms too."""
    if n is not None:
        n_min = n_max = n
    elif n_max is None:
        raise click.UsageError("give --n or --n-max")
    records = gamma_table(
        parse_sequence_spec(seq_text),
        n_max,
        fields=("spans",),
        threads=threads,
        timeout_seconds=_seconds(timeout_ms),
        n_min=n_min,
    )
    rows = [
        SpanRow(
            seq=seq_text,
            n=record.n,
            gamma=record.gamma,
            proven=record.proven and record.minspan is not None,
            minspan=record.minspan,
            maxspan=record.maxspan,
            minspan_witness=format_positions(record.minspan_witness),
            maxspan_witness=format_positions(record.maxspan_witness),
            minspan_closed=pd_minspan_closed(record.n) if seq_text == "pd" else None,
            maxspan_closed=pd_maxspan_closed(record.n) if seq_text == "pd" else None,
        )
        for record in records
    ]
    _emit(rows, fmt)


@cli.command()
@seq_option
@click.option("--window", type=click.IntRange(min=8), default=None, help="Window length W (default PROFILE_WINDOW).")
@click.option("--max-length", type=click.IntRange(min=1), default=None, help="Largest factor length sampled.")
@click.option("--kind", type=click.Choice(["appearance", "recurrence", "both"]), default="both", show_default=True)
@click.option("--no-stability", is_flag=True, help="Skip the recomputation on a doubled window.")
@format_option
@_handled
def appearance(
    seq_text: str, window: Optional[int], max_length: Optional[int], kind: str, no_stability: bool, fmt: str
) -> None:
    """Appearance and recurrence profiles with their estimated constants."""
    ws = windowed(parse_sequence_spec(seq_text), window)
    ell_max = _profile_length(ws.W, max_length)
    rows: List[OutputRow] = []
    if kind in ("appearance", "both"):
        rows.extend(ProfileRow.from_profile(seq_text, appearance_profile(ws, ell_max, not no_stability)))
    if kind in ("recurrence", "both"):
        rows.extend(ProfileRow.from_profile(seq_text, recurrence_profile(ws, ell_max, not no_stability)))
    _emit(rows, fmt)


@cli.command()
@seq_option
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option(
    "--construction", type=click.Choice(["stride", "dyadic", "recurrent"]), default="dyadic", show_default=True
)
@click.option("--stride", "s", type=click.IntRange(min=1), default=1, show_default=True, help="Stride for --construction stride.")
@click.option("--window", type=click.IntRange(min=8), default=None, help="Profile window (default PROFILE_WINDOW).")
@click.option("--c0", type=click.IntRange(min=0), default=None, help="Extra retained levels (default RETIREMENT_C0).")
@format_option
@_handled
def bound(
    seq_text: str, n: int, construction: str, s: int, window: Optional[int], c0: Optional[int], fmt: str
) -> None:
    """Attractor built from the estimated appearance (and recurrence) constant."""
    ws = windowed(parse_sequence_spec(seq_text), window)
    ell_max = _profile_length(ws.W, None)
    A = appearance_profile(ws, ell_max).estimate
    if construction == "recurrent":
        R = recurrence_profile(ws, ell_max).estimate
        result = recurrent_construction(ws, n, A, R, c0=c0)
        row = ConstructionRow.from_construction(seq_text, result, A, R)
    else:
        built = stride_attractor(ws, n, s, A) if construction == "stride" else dyadic_attractor(ws, n, A)
        row = ConstructionRow(
            seq=seq_text,
            construction=construction,
            n=n,
            size=len(built),
            positions=format_positions(built.positions),
            verified=True,
            appearance=format_rational(A),
        )
    _emit([row], fmt)


@cli.command()
@seq_option
@click.option("--n-points", default=DEFAULT_CLASSIFY_POINTS, show_default=True, help="Comma-separated sample lengths.")
@click.option("--window", type=click.IntRange(min=8), default=None, help="Window length (default 4 x largest point).")
@format_option
@_handled
def classify(seq_text: str, n_points: str, window: Optional[int], fmt: str) -> None:
    """Heuristic constant / logarithmic growth call; never a proof."""
    points = _parse_positions(n_points, "--n-points")
    evidence = classify_growth(parse_sequence_spec(seq_text), points, window=window)
    _emit([ClassifyRow.from_evidence(seq_text, evidence)], fmt)


if __name__ == "__main__":
    cli()
