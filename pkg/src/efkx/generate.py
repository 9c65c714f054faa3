"""Seeded random-instance generation for the test corpora."""

from __future__ import annotations

import random

from .errors import InputError
from .model import Instance


def gen_random(n: int, m: int, max_value: int, seed: int) -> Instance:
    """Uniform integer values in [0, max_value], fully seed-determined."""
    if n < 1 or m < 0 or max_value < 0:
        raise InputError("need n >= 1, m >= 0, max_value >= 0")
    rng = random.Random(seed)
    rows = [[rng.randint(0, max_value) for _ in range(m)] for _ in range(n)]
    return Instance.from_rows(rows)
