"""
Command-line entry point: synth, eval, trop-eval, relu-export, verify,
stats and gen.
"""

from __future__ import annotations

import functools
import logging
from pathlib import Path

import click

from . import load_settings, raise_guards, settings
from .circuit import (
    Circuit,
    TropicalCircuit,
    circuit_stats,
    eval_rational,
    eval_tropical,
    lower_to_relu,
    naive_from_bases,
    tropicalize,
)
from .decompose import auto_decompose
from .errors import FormatError, MatroidCircuitError, UnassignedVariable
from .fixtures import load_fixture
from .formats import (
    format_binary_rows,
    format_circuit,
    format_matroid,
    format_relu,
    format_tree,
    parse_circuit,
    parse_matroid,
    parse_point,
    parse_tree,
)
from .matroid import GraphRep, enumerate_bases
from .oracles import format_rational
from .suites import run_suite, suite_names
from .synth import LedgerEntry, SynthesisReport, synth, synth_graphic
from .tree import A7, A10, A12, F7_LABELS, R10_LABELS, R12_LABELS, with_identity

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# matrices written row for row by ``gen``
_PRINTED = {
    "r10": (A10, R10_LABELS, "R10"),
    "r12": (A12, R12_LABELS, "R12"),
    "f7": (A7, F7_LABELS, "F7"),
}


class CommandFailed(click.ClickException):
    """Library error surfaced with its own message and exit code."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code

    def show(self, file=None) -> None:
        click.echo(self.format_message(), err=True)


def library_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (FormatError, UnassignedVariable) as exc:
            raise CommandFailed(str(exc), 2) from exc
        except MatroidCircuitError as exc:
            raise CommandFailed(f"{type(exc).__name__}: {exc}", 1) from exc
        except OSError as exc:
            raise CommandFailed(str(exc), 2) from exc

    return wrapper


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _first_line(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line
    return ""


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Overrides MATROID_LOG_LEVEL.",
)
def cli(log_level):
    """Basis-polynomial circuits for regular and MFMC matroids."""
    load_settings()
    level = (log_level or settings.log_level).upper()
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# ============================================================
# SYNTH
# ============================================================
def _naive_report(M) -> SynthesisReport:
    C = naive_from_bases(enumerate_bases(M), M.ground)
    n = M.n
    entry = LedgerEntry("root", "naive", n, C.size, C.size, n**3)
    return SynthesisReport(C, C.size, n**3, (entry,), {e: e for e in M.ground})


@cli.command("synth")
@click.option("--tree", "tree_arg", help="Tree text starting with '(' or a tree file.")
@click.option("--matroid", "matroid_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--auto", is_flag=True, help="Decompose the matroid automatically.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the circuit here.")
@click.option("--max-n", type=int, default=None, help="Raise every element-count guard.")
@library_errors
def cmd_synth(tree_arg, matroid_path, auto, out, max_n):
    """Synthesize a subtraction-free circuit for the basis polynomial."""
    if (tree_arg is None) == (matroid_path is None):
        raise click.UsageError("give exactly one of --tree or --matroid")
    if auto and matroid_path is None:
        raise click.UsageError("--auto needs --matroid")
    if max_n is not None:
        raise_guards(max_n)

    if tree_arg is not None:
        if tree_arg.lstrip().startswith("("):
            tree = parse_tree(tree_arg)
        else:
            tree = parse_tree(_read(tree_arg), base_dir=Path(tree_arg).parent)
        report = synth(tree)
    else:
        M = parse_matroid(_read(matroid_path))
        if auto:
            report = synth(auto_decompose(M))
        elif isinstance(M.backing, GraphRep):
            report = synth_graphic(M.backing.edges)
        else:
            report = _naive_report(M)

    if out:
        _write(out, format_circuit(report.circuit))
        for line in report.lines():
            click.echo(line)
    else:
        click.echo(format_circuit(report.circuit), nl=False)
        for line in report.lines():
            click.echo(f"# {line}")


# ============================================================
# EVALUATION
# ============================================================
@cli.command("eval")
@click.argument("circuit_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("point_path", type=click.Path(exists=True, dir_okay=False))
@library_errors
def cmd_eval(circuit_path, point_path):
    """Evaluate a circuit exactly at a point."""
    C = parse_circuit(_read(circuit_path))
    p = parse_point(_read(point_path))
    if isinstance(C, TropicalCircuit):
        value = eval_tropical(C, p.assignment)
    else:
        value = eval_rational(C, p.assignment)
    click.echo(format_rational(value))


@cli.command("trop-eval")
@click.argument("circuit_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("point_path", type=click.Path(exists=True, dir_okay=False))
@library_errors
def cmd_trop_eval(circuit_path, point_path):
    """Evaluate the tropicalization of a circuit (max-plus)."""
    C = parse_circuit(_read(circuit_path))
    T = tropicalize(C) if isinstance(C, Circuit) else C
    p = parse_point(_read(point_path))
    click.echo(format_rational(eval_tropical(T, p.assignment)))


@cli.command("relu-export")
@click.argument("circuit_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--tropicalize", "tropicalize_first", is_flag=True, help="Accept a rational circuit.")
@click.option("--out", type=click.Path(dir_okay=False))
@library_errors
def cmd_relu_export(circuit_path, tropicalize_first, out):
    """Lower a tropical circuit to a ReLU network."""
    C = parse_circuit(_read(circuit_path))
    if isinstance(C, Circuit):
        if not tropicalize_first:
            raise click.UsageError("this is a rational circuit; pass --tropicalize")
        C = tropicalize(C)
    N = lower_to_relu(C)
    text = format_relu(N)
    if out:
        _write(out, text)
    else:
        click.echo(text, nl=False)
    click.echo(f"neurons={N.size} bound={3 * C.size}", err=out is None)


# ============================================================
# VERIFY / STATS / GEN
# ============================================================
@cli.command("verify")
@click.argument("suite", type=click.Choice(suite_names()))
@click.option("--seed", type=int, default=None)
@click.option("--trials", type=int, default=None)
@click.option("--max-n", type=int, default=None)
@click.pass_context
@library_errors
def cmd_verify(ctx, suite, seed, trials, max_n):
    """Run an acceptance suite; exit 1 on any FAIL."""
    if max_n is not None:
        raise_guards(max_n)
    verdicts = run_suite(suite, seed=seed, trials=trials)
    failed = 0
    for v in verdicts:
        click.echo(v.report_line())
        failed += not v.passed
    click.echo(f"checks={len(verdicts)} failed={failed}")
    if failed:
        ctx.exit(1)


@cli.command("stats")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@library_errors
def cmd_stats(path):
    """Size figures of a circuit or matroid file."""
    text = _read(path)
    if _first_line(text).startswith("matroid"):
        M = parse_matroid(text)
        click.echo(f"n={M.n} rank={M.rank} bases={len(enumerate_bases(M))}")
        return
    s = circuit_stats(parse_circuit(text))
    counts = " ".join(f"{op}={k}" for op, k in sorted(s.counts.items()))
    click.echo(f"size={s.size} depth={s.depth} variables={s.variables} {counts}".rstrip())


@cli.command("gen")
@click.argument("name")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".")
@library_errors
def cmd_gen(name, out_dir):
    """Write the named fixture as <name>.mtx and, if it has one, <name>.tree."""
    fx = load_fixture(name)
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)

    if fx.name in _PRINTED:
        A, labels, title = _PRINTED[fx.name]
        text = format_binary_rows(with_identity(A), labels, title)
    else:
        text = format_matroid(fx.matroid)
    written = [target / f"{fx.name}.mtx"]
    _write(written[0], text)

    if fx.tree is not None:
        written.append(target / f"{fx.name}.tree")
        _write(written[1], format_tree(fx.tree))
    for p in written:
        click.echo(str(p))


def main() -> None:
    cli(prog_name="matroid-circuits")


__all__ = ["cli", "main", "CommandFailed"]
