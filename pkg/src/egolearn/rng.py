"""Deterministic random substreams.

Every stochastic component draws from a substream keyed by small integers
(e.g. ``(seed, STREAM_TREE, tree_index)``), so results never depend on
execution order or on how many other components consumed randomness.
"""

from __future__ import annotations

import numpy as np

# Stream tags; keep values stable, serialized runs depend on them.
STREAM_TREE = 1
STREAM_RESAMPLE = 2
STREAM_IMPORTANCE = 3
STREAM_SPLIT = 4
STREAM_EVAL = 5
STREAM_SYNTH = 6
STREAM_TUNE = 7
STREAM_FOLDS = 8

MAX_SEED = 2**63 - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream of ``seed`` addressed by ``key``.

    Identical (seed, key) always yields an identical stream; distinct keys
    yield statistically independent streams.
    """
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be in [0, {MAX_SEED}], got {seed}")
    if any(k < 0 for k in key):
        raise ValueError(f"substream key parts must be non-negative, got {key}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))
