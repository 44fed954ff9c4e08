"""
Append-only result cache.

Each line is a JSON object ``{"key": ..., "exit": ..., "output": ..., "sum": ...}``
where ``sum`` is the sha256 of the other three fields.  Lines that fail to
parse or whose checksum does not match are skipped with a warning, so an
interrupted write never poisons later runs.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Optional

log = logging.getLogger(__name__)

ENV_VAR = "PUREFIELDS_CACHE"


def cache_key(parts: dict) -> str:
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _checksum(key: str, code: int, output: str) -> str:
    return hashlib.sha256(f"{key}\n{code}\n{output}".encode()).hexdigest()


class ResultCache:
    def __init__(self, path: str | os.PathLike) -> None:
        self.path = Path(path)
        self._entries: Optional[dict[str, tuple[int, str]]] = None

    @classmethod
    def from_env(cls, explicit: Optional[str] = None) -> Optional["ResultCache"]:
        path = explicit or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    def _load(self) -> dict[str, tuple[int, str]]:
        if self._entries is not None:
            return self._entries
        entries: dict[str, tuple[int, str]] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        rec = json.loads(line)
                        key, code, output = rec["key"], int(rec["exit"]), rec["output"]
                        if rec["sum"] != _checksum(key, code, output):
                            raise ValueError("checksum mismatch")
                    except (ValueError, KeyError, TypeError) as e:
                        log.warning("%s:%d: skipping corrupt cache line (%s)", self.path, lineno, e)
                        continue
                    entries[key] = (code, output)
        self._entries = entries
        return entries

    def get(self, key: str) -> Optional[tuple[int, str]]:
        return self._load().get(key)

    def put(self, key: str, code: int, output: str) -> None:
        entries = self._load()
        if key in entries:
            return
        rec = {"key": key, "exit": code, "output": output, "sum": _checksum(key, code, output)}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        entries[key] = (code, output)

    def __len__(self) -> int:
        return len(self._load())
