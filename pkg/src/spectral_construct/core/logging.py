"""Structured JSON or plain-text logging setup with scoped run context.

Commands, sweeps and verification runs open a ``log_context`` scope; every
record emitted inside it carries the scope's fields (command, window,
profile). Per-record fields such as the sweep node index and lambda are
passed through ``extra``.
"""

from __future__ import annotations

import json
import logging
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Iterator

CONTEXT_FIELDS = ("command", "profile", "window", "check", "node", "lam")

_context: ContextVar[dict[str, Any]] = ContextVar("spectral_log_context", default={})


@contextmanager
def log_context(**fields: Any) -> Iterator[None]:
    """Attach ``fields`` to every record logged inside the block; scopes nest."""
    token = _context.set({**_context.get(), **fields})
    try:
        yield
    finally:
        _context.reset(token)


def current_context() -> dict[str, Any]:
    return dict(_context.get())


class ContextFilter(logging.Filter):
    """Copy the active scope onto records that do not already carry the field."""

    def filter(self, record: logging.LogRecord) -> bool:
        for key, value in _context.get().items():
            if not hasattr(record, key):
                setattr(record, key, value)
        return True


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class JSONFormatter(logging.Formatter):
    """One JSON object per record, with context fields when present."""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key in CONTEXT_FIELDS:
            if hasattr(record, key):
                log_entry[key] = _jsonable(getattr(record, key))
        if record.exc_info and record.exc_info[1]:
            log_entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_entry, default=str)


class PlainFormatter(logging.Formatter):
    """Plain text, prefixed with the command name inside a command scope."""

    def __init__(self):
        super().__init__("%(asctime)s %(levelname)-8s [%(name)s] %(message)s")

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        command = getattr(record, "command", None)
        return f"{command}: {line}" if command else line


def setup_logging(json_format: bool = False, level: str = "WARNING") -> None:
    """Configure package logging.

    Args:
        json_format: If True, use JSON formatter; otherwise plain text.
        level: Log level string.

    Output goes to stderr so JSON/CSV written to stdout stays parseable.
    """
    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JSONFormatter() if json_format else PlainFormatter())
    handler.addFilter(ContextFilter())

    root.handlers.clear()
    root.addHandler(handler)
