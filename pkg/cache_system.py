"""File-based cache for deterministic experiment reports."""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from env import CACHE_DIR

logger = logging.getLogger(__name__)


class ExperimentCache:
    """Stores report text keyed by the canonical request that produced it.

    Reports are deterministic in their request (inputs, seeds, tolerances), so
    entries never expire.
    """

    def __init__(self, cache_dir: str = CACHE_DIR, enabled: bool = True) -> None:
        self.cache_dir = Path(cache_dir)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    @staticmethod
    def cache_key(request: dict[str, Any]) -> str:
        """md5 of the request with sorted keys."""
        canonical = json.dumps(request, sort_keys=True, separators=(",", ":"))
        return hashlib.md5(canonical.encode()).hexdigest()  # noqa: S324

    def _path(self, request: dict[str, Any]) -> Path:
        return self.cache_dir / f"{self.cache_key(request)}.json"

    def get(self, request: dict[str, Any]) -> Optional[str]:
        """Cached report for the request, if any."""
        if not self.enabled:
            return None
        cache_file = self._path(request)
        if not cache_file.exists():
            self.misses += 1
            return None
        try:
            data = json.loads(cache_file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            logger.warning("unreadable cache entry %s", cache_file.name)
            self.misses += 1
            return None
        if data.get("request") != request:
            self.misses += 1
            return None
        self.hits += 1
        logger.info("cache hit for %s", request.get("command", "request"))
        return str(data["report"])

    def set(self, request: dict[str, Any], report: str) -> None:
        """Store the report text."""
        if not self.enabled:
            return
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        payload = {"request": request, "report": report}
        self._path(request).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")

    def get_stats(self) -> dict[str, Union[int, str]]:
        """Get cache statistics."""
        total = self.hits + self.misses
        hit_rate = (self.hits / total * 100) if total > 0 else 0
        cached = len(list(self.cache_dir.glob("*.json"))) if self.cache_dir.exists() else 0
        return {
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": f"{hit_rate:.1f}%",
            "cached_items": cached,
        }
