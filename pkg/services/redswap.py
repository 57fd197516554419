"""Move red loops into the green region without changing the multigraph."""
import logging
from typing import Tuple

import numpy as np

from exceptions import InsufficientGreenEdgesError
from models import EdgeClassification, SwapPair, SwapRecord
from services.metrics import red_swaps
from services.sequences import Sequence

logger = logging.getLogger(__name__)


def swap_red_loops(seq: Sequence, cls: EdgeClassification,
                   rng: np.random.Generator) -> Tuple[Sequence, SwapRecord]:
    """
    Exchange every red loop with a green proper edge.

    The targets are a uniformly random subset of the green proper edges,
    sorted by index; the j-th red loop (in order of appearance) trades its
    k-entry block with the j-th target, vertex order preserved.

    Raises:
        InsufficientGreenEdgesError: fewer green proper edges than red loops
    """
    loops = cls.red_loop_indices
    out = seq.copy()
    if not loops:
        return out, SwapRecord()

    pool = list(cls.green_proper_indices)
    if len(pool) < len(loops):
        raise InsufficientGreenEdgesError(len(loops), len(pool))

    # Partial Fisher-Yates: the first len(loops) slots become a uniform subset.
    for j in range(len(loops)):
        s = int(rng.integers(j, len(pool)))
        pool[j], pool[s] = pool[s], pool[j]
    targets = sorted(pool[:len(loops)])

    k = seq.params.k
    entries = out.entries
    pairs = []
    for f, e in zip(loops, targets):
        a, b = k * f, k * e
        block = entries[a:a + k].copy()
        entries[a:a + k] = entries[b:b + k]
        entries[b:b + k] = block
        pairs.append(SwapPair(red_loop_index=f, green_target_index=e))

    red_swaps.inc(len(pairs))
    logger.debug(f"[REDSWAP] swapped {len(pairs)} red loops: {[(q.red_loop_index, q.green_target_index) for q in pairs]}")
    return out, SwapRecord(pairs=pairs)
