"""Report documents, their JSON/TSV encodings, and the optional result cache."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

SCHEMA_VERSION = "1"
CACHE_ENV = "PELLDESCENT_CACHE"
CACHE_VERIFY_ENV = "PELLDESCENT_CACHE_VERIFY"


def enc(v: Any) -> Any:
    """Encode a value for output: every scalar becomes a string, absent becomes ""."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return v
    if isinstance(v, dict):
        return {str(k): enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [enc(x) for x in v]
    return str(v)


def join(values) -> str:
    """Flatten a list into one comma-separated cell (rows stay flat for TSV)."""
    return ",".join(enc(v) for v in values)


@dataclass
class ReportDocument:
    command: list[str]
    deltas: list[str]
    payload: dict
    timing: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "deltas": self.deltas,
            "payload": self.payload,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ReportDocument:
        d = json.loads(text)
        return cls(d["command"], d["deltas"], d["payload"], d["timing"], d["schema_version"])

    def rows(self) -> list[dict]:
        """The flat projection used for TSV."""
        if "rows" in self.payload:
            return self.payload["rows"]
        return [{k: v for k, v in self.payload.items() if isinstance(v, str)}]

    def to_tsv(self) -> str:
        return to_tsv(self.rows())


def to_tsv(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    lines = ["\t".join(keys)]
    for row in rows:
        if list(row) != keys:
            raise ValueError("TSV rows must share one header")
        cells = [row[k] for k in keys]
        if any(not isinstance(c, str) or "\t" in c or "\n" in c for c in cells):
            raise ValueError("TSV cells must be flat strings")
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> list[dict]:
    lines = text.rstrip("\n").split("\n") if text else []
    if not lines:
        return []
    keys = lines[0].split("\t")
    return [dict(zip(keys, line.split("\t"))) for line in lines[1:]]


# --------------------------------------------------------------------------
# cache


class CacheMismatch(AssertionError):
    pass


def cache_key(subcommand: str, delta: int, params: dict) -> str:
    blob = json.dumps([SCHEMA_VERSION, subcommand, str(delta), enc(params)], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """Append-only JSONL log of payloads keyed by content hash.

    Only the process that owns the cache writes to it; workers return
    payloads and the caller stores them.
    """

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self._entries: dict[str, Any] = {}
        if self.path and self.path.exists():
            with self.path.open() as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        entry = json.loads(line)
                        self._entries.setdefault(entry["key"], entry["value"])

    @classmethod
    def from_env(cls) -> ResultCache:
        return cls(os.environ.get(CACHE_ENV) or None)

    @property
    def enabled(self) -> bool:
        return self.path is not None

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: str):
        return self._entries.get(key)

    def put(self, key: str, value) -> None:
        if not self.enabled or key in self._entries:
            return
        self._entries[key] = value
        with self.path.open("a") as fh:
            fh.write(json.dumps({"key": key, "value": value}, sort_keys=True) + "\n")

    def lookup(self, key: str, compute: Callable[[], Any], verify: bool | None = None):
        """Cached value for ``key``; with ``verify`` a hit is recomputed and compared."""
        if verify is None:
            verify = os.environ.get(CACHE_VERIFY_ENV) == "1"
        hit = self.get(key) if self.enabled else None
        if hit is not None and not verify:
            return hit
        value = compute()
        if hit is not None and hit != value:
            raise CacheMismatch(f"cache entry {key[:12]} differs from recomputation")
        self.put(key, value)
        return value
