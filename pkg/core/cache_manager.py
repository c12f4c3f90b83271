"""
Cache Manager for per-lattice artifacts reused across Monte Carlo trials
"""

import logging
import threading
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional


@dataclass
class CacheEntry:
    value: Any
    expires_at: float


class CacheManager:
    """
    Thread-safe in-memory store with TTL for expensive derived objects.

    Lattices, maps and decoders are built once per process and shared by
    every trial of that process; hit and build counters feed the
    simulation summary.
    """

    def __init__(self, default_ttl: int = 3600) -> None:
        """
        Args:
            default_ttl: Time-to-live in seconds for new entries
        """
        self.entries: Dict[str, CacheEntry] = {}
        self.default_ttl = default_ttl
        self.hits = 0
        self.builds = 0
        self.build_seconds = 0.0
        self.lock = threading.RLock()
        self.logger = logging.getLogger(__name__)

    def _live(self, key: str) -> Optional[CacheEntry]:
        entry = self.entries.get(key)
        if entry is None:
            return None
        if time.monotonic() >= entry.expires_at:
            del self.entries[key]
            self.logger.debug(f"Artifact expired: {key}")
            return None
        return entry

    def get(self, key: str) -> Optional[Any]:
        with self.lock:
            entry = self._live(key)
            return None if entry is None else entry.value

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> None:
        ttl = self.default_ttl if ttl is None else ttl
        with self.lock:
            self.entries[key] = CacheEntry(value, time.monotonic() + ttl)

    def get_or_build(self, key: str, builder: Callable[[], Any], ttl: Optional[int] = None) -> Any:
        """
        Return the live entry for key, building and storing it on a miss.

        Args:
            key: Cache key
            builder: Zero-argument factory
            ttl: Time-to-live in seconds (default_ttl if None)
        """
        with self.lock:
            entry = self._live(key)
            if entry is not None:
                self.hits += 1
                return entry.value
            began = time.perf_counter()
            value = builder()
            elapsed = time.perf_counter() - began
            self.builds += 1
            self.build_seconds += elapsed
            self.set(key, value, ttl)
            self.logger.debug(f"Built {key} in {elapsed:.3f}s")
            return value

    def cleanup_expired(self) -> int:
        """
        Drop every expired entry.

        Returns:
            Number of entries removed
        """
        now = time.monotonic()
        with self.lock:
            expired = [key for key, entry in self.entries.items() if now >= entry.expires_at]
            for key in expired:
                del self.entries[key]
        if expired:
            self.logger.info(f"Dropped {len(expired)} expired artifacts")
        return len(expired)

    def get_stats(self) -> Dict[str, Any]:
        now = time.monotonic()
        with self.lock:
            expired = sum(1 for entry in self.entries.values() if now >= entry.expires_at)
            return {
                'entries': len(self.entries),
                'expired_entries': expired,
                'hits': self.hits,
                'builds': self.builds,
                'build_seconds': self.build_seconds,
            }


class ArtifactCache(CacheManager):
    """
    Artifacts keyed by kind and lattice (family:size:color:m).
    """

    @staticmethod
    def lattice_key(family: str, size: int, color: Optional[str] = None, m: Optional[int] = None) -> str:
        return f"{family}:{size}:{color or '-'}:{m if m is not None else '-'}"

    def get_artifact(self, kind: str, lattice_key: str, builder: Callable[[], Any], *extra: Any) -> Any:
        """
        Args:
            kind: Artifact name, e.g. "bundle" or "decoder"
            lattice_key: Key from lattice_key()
            builder: Factory called on a miss
            extra: Further key parts (backend, channel, rate)
        """
        suffix = "".join(f":{part}" for part in extra)
        return self.get_or_build(f"{kind}:{lattice_key}{suffix}", builder)

    def invalidate_lattice(self, lattice_key: str) -> int:
        """
        Release every artifact built for one lattice.

        Returns:
            Number of entries removed
        """
        with self.lock:
            stale = []
            for key in self.entries:
                rest = key.split(":", 1)[-1]
                if rest == lattice_key or rest.startswith(lattice_key + ":"):
                    stale.append(key)
            for key in stale:
                del self.entries[key]
        if stale:
            self.logger.debug(f"Released {len(stale)} artifacts of {lattice_key}")
        return len(stale)


_artifact_cache = ArtifactCache()


def get_artifact_cache() -> ArtifactCache:
    return _artifact_cache
