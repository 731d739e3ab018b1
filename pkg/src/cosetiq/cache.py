"""On-disk cache of JSON artifacts keyed by run parameters, tool version and recipe ids."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from ._version import RECIPES, __version__

log = logging.getLogger(__name__)

ENV_VAR = "COSETIQ_CACHE"


def resolve_cache_dir(flag: str | None = None) -> Path:
    """Explicit flag, then $COSETIQ_CACHE, then ~/.cache/cosetiq."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cosetiq"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


class ArtifactCache:
    def __init__(self, root: Path | str):
        self.root = Path(root)

    def key(self, kind: str, **params) -> dict:
        return {"kind": kind, "version": __version__, "recipes": RECIPES, **params}

    def path(self, key: dict) -> Path:
        parts = [key["kind"]] + [f"{k}{key[k]}" for k in sorted(key) if k not in ("kind", "version", "recipes")]
        name = "-".join(str(p).replace("/", "_").replace(",", "_") for p in parts)
        return self.root / f"{name}-{digest(canonical(key))[:12]}.json"

    def load(self, key: dict) -> str | None:
        """The stored payload text, or None if missing, stale or corrupted."""
        p = self.path(key)
        if not p.exists():
            return None
        try:
            doc = json.loads(p.read_text())
            payload = doc["payload"]
            ok = doc["key"] == key and doc["sha256"] == digest(payload)
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            log.warning("cache entry %s is corrupted or stale; recomputing", p)
            return None
        return payload

    def store(self, key: dict, payload: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(key)
        doc = {"key": key, "sha256": digest(payload), "payload": payload}
        tmp = p.with_suffix(".tmp")
        tmp.write_text(canonical(doc) + "\n")
        tmp.replace(p)
        return p

    def get_or_compute(self, key: dict, compute) -> tuple[str, bool]:
        """(payload, hit) where compute() returns the payload text on a miss."""
        cached = self.load(key)
        if cached is not None:
            return cached, True
        payload = compute()
        self.store(key, payload)
        return payload, False
