"""
Certificate Storage Abstraction

Building a large Halton certificate (Dirichlet search plus million-bit
indices) takes a while, so serialized certificates can be kept on disk
keyed by their construction parameters.

Supports:
- Local filesystem (opt-in with --allow-local-cache)
- No-op storage (default)
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from certificates.serialize import save_json
from utils.config import get_config

logger = logging.getLogger(__name__)


class CertificateStore(ABC):
    """Abstract base class for certificate storage backends."""

    @abstractmethod
    def get(self, key: str) -> Optional[Dict[str, Any]]:
        """Retrieve a serialized certificate by key. Returns None if not found."""

    @abstractmethod
    def set(self, key: str, data: Dict[str, Any]) -> None:
        """Store a serialized certificate under the given key."""

    @abstractmethod
    def exists(self, key: str) -> bool:
        pass

    @abstractmethod
    def delete(self, key: str) -> bool:
        """Delete a key. Returns True if deleted."""

    @property
    @abstractmethod
    def is_available(self) -> bool:
        pass


class NullCertificateStore(CertificateStore):
    """Stores nothing; used when caching is disabled."""

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        return None

    def set(self, key: str, data: Dict[str, Any]) -> None:
        pass

    def exists(self, key: str) -> bool:
        return False

    def delete(self, key: str) -> bool:
        return False

    @property
    def is_available(self) -> bool:
        return False


class LocalCertificateStore(CertificateStore):
    """One JSON file per certificate under ``cache_dir``."""

    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = cache_dir or get_config().cert_cache_dir
        os.makedirs(self.cache_dir, exist_ok=True)

    def _get_path(self, key: str) -> str:
        safe_key = key.replace("/", "_").replace("\\", "_")
        return os.path.join(self.cache_dir, f"{safe_key}.json")

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        path = self._get_path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            logger.warning("[Cache] Unreadable entry %s: %s", path, e)
            return None

    def set(self, key: str, data: Dict[str, Any]) -> None:
        save_json(self._get_path(key), data)
        logger.debug("[Cache] Stored %s", key)

    def exists(self, key: str) -> bool:
        return os.path.exists(self._get_path(key))

    def delete(self, key: str) -> bool:
        path = self._get_path(key)
        if os.path.exists(path):
            os.remove(path)
            return True
        return False

    @property
    def is_available(self) -> bool:
        return True


_certificate_store: Optional[CertificateStore] = None


def get_certificate_store(allow_local: bool = False) -> CertificateStore:
    """
    Get the process-wide certificate store.

    Args:
        allow_local: Use the local filesystem store; otherwise nothing is cached

    Returns:
        CertificateStore instance
    """
    global _certificate_store
    if _certificate_store is not None:
        return _certificate_store
    if allow_local:
        logger.info("[Cache] Using local certificate cache in %s", get_config().cert_cache_dir)
        _certificate_store = LocalCertificateStore()
    else:
        logger.debug("[Cache] Certificate caching disabled (use --allow-local-cache)")
        _certificate_store = NullCertificateStore()
    return _certificate_store


def reset_certificate_store() -> None:
    """Reset the global store instance (for testing)."""
    global _certificate_store
    _certificate_store = None


def certificate_key(family: str, **params) -> str:
    """
    Cache key from the family and its construction parameters.

    Args:
        family: Family tag, used as the key prefix
        **params: Construction parameters (bases, k, p, w, case, a, ...)

    Returns:
        "<family>_<sha256 of the sorted parameters>"
    """
    parts = [f"{key}_{params[key]}" for key in sorted(params)]
    digest = hashlib.sha256("_".join(parts).encode("utf-8")).hexdigest()
    return f"{family}_{digest[:32]}"
