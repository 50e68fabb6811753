"""Named random substreams derived from one master seed.

Every consumer of randomness (geometry, shadowing, fault draws, mobility,
policy, weight init) gets its own generator keyed by (master_seed, channel,
extra...).  Changing the agent therefore never perturbs the environment
realization, which makes paired comparisons across agents meaningful.
Per-episode channels additionally key on the episode index so episode k
starts from the same draws for every agent.
"""

from __future__ import annotations

import numpy as np

GEOMETRY = 0
SHADOW = 1
FAULTS = 2
MOBILITY = 3
POLICY = 4
WEIGHTS = 5


def stream(master_seed: int, channel: int, *extra: int) -> np.random.Generator:
    """Return a deterministic generator for one named substream."""
    if master_seed < 0:
        raise ValueError("master seed must be non-negative")
    return np.random.default_rng(np.random.SeedSequence((master_seed, channel, *extra)))
