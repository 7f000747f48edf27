"""
Table emitters: JSON (the machine contract), CSV and Markdown pipe tables.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, List, Mapping, Optional, Sequence

import click
from rich.console import Console
from rich.markdown import Markdown

FORMATS = ("json", "csv", "md")


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell(item) for item in value)
    return str(value)


def _columns(rows: Sequence[Mapping[str, Any]], columns: Optional[Sequence[str]]) -> List[str]:
    if columns is not None:
        return list(columns)
    seen: List[str] = []
    for row in rows:
        seen.extend(key for key in row if key not in seen)
    return seen


def to_csv(rows: Sequence[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    names = _columns(rows, columns)
    writer.writerow(names)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in names])
    return buffer.getvalue()


def to_markdown(rows: Sequence[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    names = _columns(rows, columns)
    lines = ["| " + " | ".join(names) + " |", "|" + "|".join("---" for _ in names) + "|"]
    for row in rows:
        cells = [_cell(row.get(name)).replace("|", "\\|") for name in names]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit(
    rows: Iterable[Mapping[str, Any]],
    fmt: str = "json",
    columns: Optional[Sequence[str]] = None,
    payload: Any = None,
) -> str:
    """
    Render rows in fmt. JSON prints payload when given (an object wrapping the rows), otherwise the
    row array; CSV and Markdown always print the rows.
    """
    rows = list(rows)
    if fmt == "json":
        return to_json(rows if payload is None else payload)
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "md":
        return to_markdown(rows, columns)
    raise ValueError(f"Unknown format: {fmt}")


def show(text: str, fmt: str, console: Optional[Console] = None) -> None:
    """Markdown goes through rich on a terminal; everything else is written verbatim to stdout."""
    console = console or Console()
    if fmt == "md" and console.is_terminal:
        console.print(Markdown(text))
    else:
        click.echo(text, nl=False)
