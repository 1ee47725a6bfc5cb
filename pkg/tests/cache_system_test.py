"""Tests for the file-based experiment cache."""

from pathlib import Path

from cache_system import ExperimentCache

REQUEST = {"command": "average", "trials": 1000, "seed": 0}


def test_miss_then_hit(tmp_path: Path) -> None:
    """A stored report comes back for the same request."""
    cache = ExperimentCache(str(tmp_path))
    assert cache.get(REQUEST) is None
    cache.set(REQUEST, '{"mean": 0.5}')
    assert cache.get(REQUEST) == '{"mean": 0.5}'
    stats = cache.get_stats()
    assert stats["hits"] == 1
    assert stats["misses"] == 1
    assert stats["cached_items"] == 1
    assert stats["hit_rate"] == "50.0%"


def test_key_ignores_key_order() -> None:
    """Requests are canonicalized before hashing."""
    reordered = {"seed": 0, "trials": 1000, "command": "average"}
    assert ExperimentCache.cache_key(REQUEST) == ExperimentCache.cache_key(reordered)
    assert ExperimentCache.cache_key(REQUEST) != ExperimentCache.cache_key({**REQUEST, "seed": 1})


def test_disabled_cache_stores_nothing(tmp_path: Path) -> None:
    """--no-cache bypasses reads and writes."""
    cache = ExperimentCache(str(tmp_path / "off"), enabled=False)
    cache.set(REQUEST, "report")
    assert cache.get(REQUEST) is None
    assert not (tmp_path / "off").exists()


def test_corrupt_entry_is_a_miss(tmp_path: Path) -> None:
    """Unreadable files are skipped, not raised."""
    cache = ExperimentCache(str(tmp_path))
    cache.set(REQUEST, "report")
    next(tmp_path.glob("*.json")).write_text("{not json", encoding="utf-8")
    assert cache.get(REQUEST) is None
    assert cache.misses == 1
