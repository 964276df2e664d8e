"""Seeded random streams.

A stream is a Mersenne Twister seeded from SHA-256 of the generator name,
the 64-bit seed and any stream labels.  Changing PRNG_NAME is how a future
release would signal that transcripts are no longer reproducible.
"""

from __future__ import annotations

import hashlib
import os
import random

PRNG_NAME = "mt19937-sha256/v1"
SEED_ENV = "NILNIKE_SEED"


def check_seed(seed: int) -> int:
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int, *stream: object) -> random.Random:
    check_seed(seed)
    material = ":".join(str(part) for part in (PRNG_NAME, seed, *stream))
    digest = hashlib.sha256(material.encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return check_seed(int(raw, 0)) if raw else 0
