"""
Progress tracking for verification sweeps, split into leaves and a branch container.

- Check: a leaf tracking one family of checks (passes and failures)
- Checks: a branch aggregating several Check leaves by key
"""

from __future__ import annotations

from typing import Dict, List, Optional

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    ProgressColumn,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)


class Check:
    """A leaf that counts completed checks of one kind and records failures."""

    def __init__(self, title: str = "", total: Optional[int] = None):
        self.title = title
        """Display title for this family of checks"""
        self.total = total
        """Checks expected (None until complete() for an open-ended sweep)"""
        self.completed = 0
        self.failures: List[str] = []
        """Messages of the failed checks, in order"""
        self.parent: Optional[Checks] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def _changed(self) -> None:
        if self.parent is not None:
            self.parent._on_child_changed()

    def advance(self, amount: int = 1) -> None:
        self.completed += amount
        self._changed()

    def fail(self, message: str) -> None:
        """Record a failed check; it still counts as completed."""
        self.failures.append(message)
        self.advance()

    def complete(self) -> None:
        if self.total is None:
            self.total = self.completed
        self._changed()

    def __enter__(self) -> Check:
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self.failures.append(f"{exc_type.__name__}: {exc_val}")
        self.complete()
        return False


class Checks:
    """A branch that aggregates Check leaves; total stays None while any child is open-ended."""

    def __init__(self, title: str = ""):
        self.title = title
        self._children: Dict[str, Check] = {}
        self.completed = 0
        self.total: Optional[int] = None

    def _on_child_changed(self) -> None:
        children = list(self._children.values())
        self.completed = sum(child.completed for child in children)
        totals = [child.total for child in children]
        self.total = None if not children or None in totals else sum(totals)

    @property
    def failures(self) -> List[str]:
        return [f"{child.title}: {message}" for child in self._children.values() for message in child.failures]

    @property
    def passed(self) -> bool:
        return all(child.passed for child in self._children.values())

    def create_check(self, key: str, title: str = "", total: Optional[int] = None) -> Check:
        old = self._children.get(key)
        if old is not None:
            old.parent = None
        check = Check(title=title or key, total=total)
        check.parent = self
        self._children[key] = check
        self._on_child_changed()
        return check

    def __iter__(self):
        return iter(self._children)

    def items(self):
        return self._children.items()

    def values(self):
        return self._children.values()


def progress_columns() -> List[ProgressColumn]:
    """Columns of the verify progress display."""
    return [
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
    ]
