"""File output helpers: atomic writes and timestamped JSON."""

from __future__ import annotations

import datetime as _dt
import json
import os
import tempfile
from pathlib import Path


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(payload: dict, timestamp: bool = True) -> str:
    """Serialize a report dict deterministically; ``generated_at`` is the
    only field that varies between identical runs."""
    body = dict(payload)
    if timestamp:
        body["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, payload: dict, timestamp: bool = True) -> None:
    atomic_write_text(path, dumps(payload, timestamp))


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def strip_timestamp(payload: dict) -> dict:
    return {k: v for k, v in payload.items() if k != "generated_at"}
