"""Counter-based random streams.

Every stochastic step in the pipeline draws from an independent Philox
stream keyed by the run seed plus a tuple of tags (purpose string,
sample index, ...).  Streams are pure functions of their key: drawing
from stream A never advances stream B, so batches are order-independent
and safe to produce in parallel.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_key(seed: int, *tags: int | str) -> int:
    """Collapse (seed, tags...) into a stable 128-bit Philox key."""
    material = "\x1f".join([str(int(seed))] + [str(t) for t in tags]).encode("utf-8")
    digest = hashlib.blake2b(material, digest_size=16).digest()
    return int.from_bytes(digest, "big")


def stream(seed: int, *tags: int | str) -> np.random.Generator:
    """An independent generator for the given (seed, tags) key."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *tags)))
