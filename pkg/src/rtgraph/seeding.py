"""Derivation of named random substreams from one pipeline seed.

Every stage that needs randomness (louvain, forest, folds, baseline) gets
its own stable 63-bit seed derived from the configured seed and a name, so
stages stay independent and reruns are reproducible.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1
