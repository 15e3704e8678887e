"""Seeded random streams.

All Monte Carlo work draws from NumPy's counter-based Philox generator.
A stream is identified by ``(seed, *key)``; distinct keys give independent
substreams, so replications can be computed in any order (or in parallel)
and still reproduce bit for bit.
"""

import os

import numpy as np

SEED_ENV = "FRACENTROPY_SEED"
DEFAULT_SEED = 20210101


def default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value not in (None, "") else DEFAULT_SEED


def make_rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
