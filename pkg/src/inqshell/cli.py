"""Terminal front door: consult, lint, batch, explain and serve.

Exit codes are a stable scripting contract:
0 success, 1 incomplete/aborted diagnosis, 2 knowledge-base errors,
3 I/O errors.
"""

from __future__ import annotations

import os
import pathlib
import sys
from typing import Optional

import click

from . import dsl, eqetic
from .inference import explain_how
from .model import Certainty, KnowledgeBase, Severity, ident_key
from .session import (
    Answer,
    Finished,
    Selection,
    Session,
    SessionError,
    TranscriptError,
    render_structured,
    render_text,
)

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_KB_ERROR = 2
EXIT_IO_ERROR = 3

THRESHOLD_ENV = "INQSHELL_THRESHOLD"


def _load_kb(path: str) -> KnowledgeBase:
    try:
        text = pathlib.Path(path).read_text("utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    result = dsl.parse(text, filename=path)
    if not result.ok:
        for d in result.diagnostics:
            click.echo(str(d), err=True)
        sys.exit(EXIT_KB_ERROR)
    return result.kb  # type: ignore[return-value]


def _effective_threshold(flag: Optional[float]) -> Optional[float]:
    if flag is not None:
        return flag
    env = os.environ.get(THRESHOLD_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            click.echo(
                f"error: {THRESHOLD_ENV} must be a number, got {env!r}",
                err=True,
            )
            sys.exit(EXIT_IO_ERROR)
    return None


def _print_report(report, fmt: str) -> None:
    if fmt == "structured":
        click.echo(render_structured(report), nl=False)
    else:
        click.echo(render_text(report), nl=False)


@click.group()
def main() -> None:
    """Expert-system shell: knowledge-base consultations with certainty
    factors."""


@main.command()
@click.argument("kb_path")
@click.option("--threshold", type=float, default=None, help="Truth threshold.")
@click.option(
    "--transcript-out",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the consultation transcript here.",
)
@click.option(
    "--resume",
    "resume_path",
    type=click.Path(exists=False, dir_okay=False),
    default=None,
    help="Resume from a saved .etr transcript.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["human", "structured"]),
    default="human",
)
def consult(
    kb_path: str,
    threshold: Optional[float],
    transcript_out: Optional[str],
    resume_path: Optional[str],
    fmt: str,
) -> None:
    """Run an interactive consultation on KB_PATH."""
    kb = _load_kb(kb_path)
    if resume_path is not None:
        try:
            data = pathlib.Path(resume_path).read_bytes()
        except OSError as exc:
            click.echo(f"error: cannot read {resume_path}: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)
        try:
            session = Session.resume(kb, data)
        except TranscriptError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_KB_ERROR)
    else:
        session = Session(kb, truth_threshold=_effective_threshold(threshold))

    aborted = False
    while True:
        step = session.next()
        if isinstance(step, Finished):
            break
        answer = _ask_interactively(session.kb, step)
        if answer is None:
            aborted = True
            break
        try:
            session.answer(answer)
        except SessionError as exc:
            click.echo(f"  {exc}", err=True)

    if transcript_out is not None:
        try:
            pathlib.Path(transcript_out).write_bytes(session.save())
        except OSError as exc:
            click.echo(f"error: cannot write {transcript_out}: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)

    _print_report(session.report(), fmt)
    sys.exit(EXIT_INCOMPLETE if aborted else EXIT_OK)


def _ask_interactively(kb: KnowledgeBase, question) -> Optional[Answer]:
    prompt = question.prompt
    kind = prompt.kind.value
    click.echo(f"\n[{kind}] {prompt.question_text}")
    if prompt.help_text:
        click.echo(f"  ({prompt.help_text})")
    for i, option in enumerate(question.options, 1):
        click.echo(f"  {i}. {option}")
    if kind == "allchoice":
        selections = []
        for option in question.options:
            cf = _read_cf(f"certainty for {option}")
            if cf is Ellipsis:
                return None
            selections.append(Selection(option, cf))
        return Answer(question.variable, tuple(selections))
    if kind in ("forcedchoice", "choice"):
        hint = "pick one number"
    else:
        hint = "pick one or more numbers, comma-separated"
    while True:
        try:
            raw = click.prompt(f"  {hint}", prompt_suffix=": ")
        except (click.Abort, EOFError):
            return None
        try:
            indices = [int(p) for p in str(raw).replace(",", " ").split()]
            picked = [question.options[i - 1] for i in indices]
            if not picked or min(indices) < 1:
                raise ValueError
        except (ValueError, IndexError):
            click.echo("  please enter option numbers from the list")
            continue
        break
    selections = []
    for value in picked:
        cf = None
        if question.accepts_cf:
            cf = _read_cf(f"certainty for {value}")
            if cf is Ellipsis:
                return None
        selections.append(Selection(value, cf))
    return Answer(question.variable, tuple(selections))


def _read_cf(label: str):
    """Read a certainty; blank input means 100%. Returns Ellipsis on EOF."""
    while True:
        try:
            raw = click.prompt(
                f"  {label} [blank = 100%]",
                default="",
                show_default=False,
                prompt_suffix=": ",
            )
        except (click.Abort, EOFError):
            return Ellipsis
        raw = str(raw).strip()
        if not raw:
            return None
        try:
            value = float(raw.rstrip("%"))
            if raw.endswith("%") or value > 1.0:
                value /= 100.0
            Certainty(value)
            return value
        except ValueError:
            click.echo("  enter a number between 0 and 1 (or 0% and 100%)")


@main.command("lint")
@click.argument("kb_path")
def lint_cmd(kb_path: str) -> None:
    """Validate and lint KB_PATH; exit 0 iff there are no errors."""
    try:
        text = pathlib.Path(kb_path).read_text("utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {kb_path}: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    result = dsl.parse(text, filename=kb_path)
    if not result.ok:
        for d in result.diagnostics:
            click.echo(str(d))
        sys.exit(EXIT_KB_ERROR)
    diagnostics = list(result.diagnostics) + dsl.lint(result.kb)
    for d in diagnostics:
        click.echo(str(d))
    has_errors = any(d.severity is Severity.ERROR for d in diagnostics)
    sys.exit(EXIT_KB_ERROR if has_errors else EXIT_OK)


@main.command()
@click.argument("kb_path")
@click.argument("answers_path")
@click.option("--threshold", type=float, default=None, help="Truth threshold.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["human", "structured"]),
    default="human",
)
@click.option(
    "--transcript-out",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write the consultation transcript here.",
)
def batch(
    kb_path: str,
    answers_path: str,
    threshold: Optional[float],
    fmt: str,
    transcript_out: Optional[str],
) -> None:
    """Non-interactive consultation fed from an answers file."""
    kb = _load_kb(kb_path)
    try:
        answer_text = pathlib.Path(answers_path).read_text("utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {answers_path}: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    try:
        answers = parse_answers_file(answer_text)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_KB_ERROR)

    session = Session(kb, truth_threshold=_effective_threshold(threshold))
    incomplete = False
    while True:
        step = session.next()
        if isinstance(step, Finished):
            break
        selections = answers.get(ident_key(step.variable))
        if selections is None:
            incomplete = True
            break
        try:
            session.answer(Answer(step.variable, selections))
        except SessionError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_KB_ERROR)
    if transcript_out is not None:
        try:
            pathlib.Path(transcript_out).write_bytes(session.save())
        except OSError as exc:
            click.echo(f"error: cannot write {transcript_out}: {exc}", err=True)
            sys.exit(EXIT_IO_ERROR)
    _print_report(session.report(), fmt)
    sys.exit(EXIT_INCOMPLETE if incomplete else EXIT_OK)


def parse_answers_file(text: str) -> dict[str, tuple[Selection, ...]]:
    """Answers file: one `variable = value [cf X][, value [cf X]...]` per
    line; `#` comments; blank certainty means 100%."""
    answers: dict[str, tuple[Selection, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'variable = value'")
        var, rhs = line.split("=", 1)
        var = var.strip()
        selections: list[Selection] = []
        for part in rhs.split(","):
            part = part.strip()
            if not part:
                continue
            tokens = part.split()
            if len(tokens) == 1:
                selections.append(Selection(tokens[0], None))
            elif len(tokens) == 3 and tokens[1] == "cf":
                cf_text = tokens[2].rstrip("%")
                cf = float(cf_text)
                if tokens[2].endswith("%"):
                    cf /= 100.0
                selections.append(Selection(tokens[0], cf))
            else:
                raise ValueError(
                    f"line {lineno}: expected 'value' or 'value cf X'"
                )
        if not selections:
            raise ValueError(f"line {lineno}: no selections for {var!r}")
        answers[ident_key(var)] = tuple(selections)
    return answers


@main.command()
@click.argument("kb_path")
@click.argument("transcript_path")
@click.argument("goal")
def explain(kb_path: str, transcript_path: str, goal: str) -> None:
    """Show how GOAL was derived in a recorded consultation."""
    kb = _load_kb(kb_path)
    try:
        data = pathlib.Path(transcript_path).read_bytes()
    except OSError as exc:
        click.echo(f"error: cannot read {transcript_path}: {exc}", err=True)
        sys.exit(EXIT_IO_ERROR)
    try:
        session = Session.resume(kb, data)
    except TranscriptError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_KB_ERROR)
    session.report()
    for line in explain_how(session.proofs(), goal):
        click.echo(line)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--port", type=int, default=7007, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--kb",
    "kb_paths",
    multiple=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Serve this .ekb file (repeatable); defaults to the shipped "
    "eQETIC base.",
)
@click.option(
    "--ui-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Serve this directory of static files at /ui.",
)
@click.option(
    "--allow-origin",
    default="*",
    show_default=True,
    help="Value for Access-Control-Allow-Origin.",
)
def serve(
    port: int,
    host: str,
    kb_paths: tuple[str, ...],
    ui_dir: Optional[str],
    allow_origin: str,
) -> None:
    """Run the HTTP consultation service."""
    import uvicorn

    from .service import create_app

    kbs = []
    if kb_paths:
        for path in kb_paths:
            kbs.append(_load_kb(path))
    else:
        kbs.append(eqetic.build())
    app = create_app(kbs, ui_dir=ui_dir, allow_origin=allow_origin)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
