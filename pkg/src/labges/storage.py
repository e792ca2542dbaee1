"""Embedded key-value persistence for the service (SQLite-backed).

Values are opaque bytes (JSON documents in practice) addressed by
(namespace, key). The store records its own schema version and runs
registered migration hooks on open, so future layout changes can upgrade
existing data directories in place.
"""

from __future__ import annotations

import sqlite3
import threading
from pathlib import Path
from typing import Callable

STORE_SCHEMA_VERSION = 1

#: Migration hooks: version -> callable(connection) upgrading to version + 1.
MIGRATIONS: dict[int, Callable[[sqlite3.Connection], None]] = {}


class KVStore:
    """A tiny thread-safe namespaced key-value store."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(str(self._path), check_same_thread=False)
        with self._lock:
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS kv (ns TEXT NOT NULL, key TEXT NOT NULL, "
                "value BLOB NOT NULL, PRIMARY KEY (ns, key))"
            )
            self._conn.execute("CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT)")
            self._conn.commit()
            self._migrate()

    def _migrate(self) -> None:
        row = self._conn.execute("SELECT value FROM meta WHERE key='schema_version'").fetchone()
        version = int(row[0]) if row else STORE_SCHEMA_VERSION
        while version < STORE_SCHEMA_VERSION:
            hook = MIGRATIONS.get(version)
            if hook is None:
                raise RuntimeError(f"no migration registered from store schema {version}")
            hook(self._conn)
            version += 1
        self._conn.execute(
            "INSERT OR REPLACE INTO meta (key, value) VALUES ('schema_version', ?)", (str(version),)
        )
        self._conn.commit()

    @property
    def schema_version(self) -> int:
        row = self._conn.execute("SELECT value FROM meta WHERE key='schema_version'").fetchone()
        return int(row[0])

    def get(self, ns: str, key: str) -> bytes | None:
        with self._lock:
            row = self._conn.execute("SELECT value FROM kv WHERE ns=? AND key=?", (ns, key)).fetchone()
        return bytes(row[0]) if row else None

    def put(self, ns: str, key: str, value: bytes) -> None:
        with self._lock:
            self._conn.execute("INSERT OR REPLACE INTO kv (ns, key, value) VALUES (?, ?, ?)", (ns, key, value))
            self._conn.commit()

    def delete(self, ns: str, key: str) -> None:
        with self._lock:
            self._conn.execute("DELETE FROM kv WHERE ns=? AND key=?", (ns, key))
            self._conn.commit()

    def keys(self, ns: str) -> list[str]:
        with self._lock:
            rows = self._conn.execute("SELECT key FROM kv WHERE ns=? ORDER BY key", (ns,)).fetchall()
        return [r[0] for r in rows]

    def close(self) -> None:
        with self._lock:
            self._conn.close()
