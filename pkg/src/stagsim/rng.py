"""Deterministic random-stream derivation for replicates and sweep cells.

Streams are counter-based (Philox), keyed by packing
(master_seed, cell_index, replicate_index) into the 128-bit Philox key.
Distinct (cell, replicate) pairs map to distinct keys, so every replicate
of every sweep cell owns an independent stream regardless of execution
order or parallelism.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64
MAX_INDEX = 2**32


def derive_stream(
    master_seed: int, replicate_index: int, cell_index: int = 0
) -> np.random.Generator:
    """Return the RNG stream owned by one replicate of one sweep cell.

    The same arguments always yield the same stream; the mapping from
    (cell_index, replicate_index) to keys is injective.
    """
    if not 0 <= master_seed < MAX_SEED:
        raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
    if not 0 <= replicate_index < MAX_INDEX:
        raise ValueError(f"replicate_index out of range [0, 2^32): {replicate_index}")
    if not 0 <= cell_index < MAX_INDEX:
        raise ValueError(f"cell_index out of range [0, 2^32): {cell_index}")
    key = np.array(
        [master_seed, (cell_index << 32) | replicate_index], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))
