"""Clip catalog and the in-memory upload store.

Uploads live under opaque tokens with a TTL; a restart invalidates them,
which is acceptable for a teaching tool. Expired tokens are remembered as
tombstones (samples freed) so the service can answer 410 rather than 404.
"""

import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..audio import Signal, load_wav
from ..fixtures import ensure_clips


class UnknownSourceError(KeyError):
    pass


class ExpiredTokenError(KeyError):
    pass


class ClipStore:
    """Bundled clips rendered into a directory at startup, stable ordering."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.catalog = ensure_clips(self.directory)
        self._by_id = {entry["id"]: entry for entry in self.catalog}

    def entries(self) -> list[dict]:
        return list(self.catalog)

    def load(self, clip_id: str) -> Signal:
        if clip_id not in self._by_id:
            raise UnknownSourceError(clip_id)
        return load_wav(self.directory / f"{clip_id}.wav")


@dataclass
class _Upload:
    signal: Signal | None
    duration_s: float
    sample_rate: int
    expires_at: float


@dataclass
class UploadStore:
    """Synchronized token -> Signal map with TTL expiry."""

    ttl_s: float = 3600.0
    clock: object = time.monotonic
    _entries: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def put(self, signal: Signal) -> dict:
        token = "u" + uuid.uuid4().hex
        with self._lock:
            self._entries[token] = _Upload(
                signal, signal.duration, signal.rate, self.clock() + self.ttl_s
            )
        return {"token": token, "duration_s": signal.duration, "sample_rate": signal.rate}

    def get(self, token: str) -> Signal:
        with self._lock:
            entry = self._entries.get(token)
            if entry is None:
                raise UnknownSourceError(token)
            if entry.signal is None or self.clock() >= entry.expires_at:
                entry.signal = None  # free samples, keep the tombstone
                raise ExpiredTokenError(token)
            return entry.signal

    def meta(self, token: str) -> _Upload:
        with self._lock:
            entry = self._entries.get(token)
        if entry is None:
            raise UnknownSourceError(token)
        return entry

    def sweep(self) -> None:
        """Drop samples of expired entries (tombstones stay)."""
        now = self.clock()
        with self._lock:
            for entry in self._entries.values():
                if now >= entry.expires_at:
                    entry.signal = None
