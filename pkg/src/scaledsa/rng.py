"""Seeded random streams.

Every stream is a NumPy ``Generator`` over the Philox-4x64 counter-based bit
generator.  The key is derived with ``SeedSequence(seed, spawn_key=(stream,))``
so that one integer seed yields any number of independent, platform-stable
streams.  Experiment trials use ``seed = base_seed + trial_index``.
"""
from __future__ import annotations

import numpy as np

# stream identifiers used across the package
SCENARIOS = 0
VALIDATION = 1
INSTANCE = 2
CHECKS = 3


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def trial_seed(base_seed: int, trial_index: int) -> int:
    return int(base_seed) + int(trial_index)
