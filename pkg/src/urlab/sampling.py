"""Deterministic seeded randomness keyed by parameter tuples."""
from __future__ import annotations

import hashlib
import os
import random

from gmpy2 import mpq

DEFAULT_SEED = 20240607


def default_seed() -> int:
    """The published seed, unless URLAB_SEED overrides it."""
    env = os.environ.get("URLAB_SEED")
    return int(env) if env not in (None, "") else DEFAULT_SEED


def rng_for(seed: int, *parts) -> random.Random:
    """A Random stream determined by ``seed`` and the key ``parts`` only."""
    h = hashlib.sha256(repr((int(seed),) + tuple(parts)).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def small_rational(rng: random.Random, span: int = 5, max_den: int = 3) -> mpq:
    return mpq(rng.randint(-span, span), rng.randint(1, max_den))


def nonzero_int(rng: random.Random, span: int = 5) -> int:
    v = 0
    while v == 0:
        v = rng.randint(-span, span)
    return v
