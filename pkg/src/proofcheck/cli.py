"""Command line entry points.

check  - check one proof file, print text or JSON feedback
serve  - run the HTTP service, optionally with an exercise bank
bank   - bank maintenance (validate)

Exit codes for check: 0 accepted, 1 rejected, 2 unreadable input.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import engine, serialize
from .bank import BankParseError, load_bank
from .diagnostics import render_feedback

DEFAULT_PORT = 8000


@click.group()
def main() -> None:
    """Didactical proof checker for controlled natural language."""


@main.command()
@click.argument("path", type=click.Path())
@click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
)
@click.option(
    "--verbosity",
    type=click.Choice(list(serialize.VERBOSITIES)),
    default="terse",
    show_default=True,
)
def check(path: str, fmt: str, verbosity: str) -> None:
    """Check the proof text in PATH."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(2)
    report = engine.check_document(text)
    if fmt == "json":
        payload = serialize.response_payload(report, verbosity)
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        click.echo(render_feedback(report, verbosity), nl=False)
    sys.exit(0 if report.accepted else 1)


@main.command()
@click.option("--port", type=int, default=None, help="Port (default: $PROOFCHECK_PORT or 8000).")
@click.option("--bank", "bank_path", type=click.Path(), default=None, help="Exercise bank file.")
def serve(port: int | None, bank_path: str | None) -> None:
    """Run the HTTP checking service."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("PROOFCHECK_PORT", str(DEFAULT_PORT)))
    exercises = ()
    if bank_path is not None:
        try:
            exercises = load_bank(bank_path)
        except (OSError, UnicodeDecodeError) as exc:
            click.echo(f"error: cannot read {bank_path}: {exc}", err=True)
            sys.exit(2)
        except BankParseError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    uvicorn.run(create_app(exercises), host="127.0.0.1", port=port)


@main.group()
def bank() -> None:
    """Exercise bank maintenance."""


@bank.command("validate")
@click.argument("path", type=click.Path())
def bank_validate(path: str) -> None:
    """Validate the bank file at PATH."""
    try:
        exercises = load_bank(path)
    except (OSError, UnicodeDecodeError) as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(2)
    except BankParseError as exc:
        click.echo(f"invalid: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ok: {len(exercises)} exercises")


if __name__ == "__main__":
    main()
