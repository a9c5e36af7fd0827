"""Vectorised cross products of grouped point sets."""
from __future__ import annotations

import numpy as np


def cross_pairs(
    start1: np.ndarray, count1: np.ndarray, start2: np.ndarray, count2: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All index pairs (i1, i2) with i1 in group k of set 1 and i2 in group k of set 2.

    Group k of set j occupies ``start_j[k] : start_j[k] + count_j[k]``.  Returns
    ``(owner, i1, i2)`` where ``owner[t]`` is the group k of pair t; pairs are
    ordered by group, then i1, then i2.
    """
    count1 = np.asarray(count1, dtype=np.int64)
    count2 = np.asarray(count2, dtype=np.int64)
    sizes = count1 * count2
    total = int(sizes.sum())
    owner = np.repeat(np.arange(len(sizes)), sizes)
    offset = np.cumsum(sizes) - sizes
    local = np.arange(total, dtype=np.int64) - offset[owner]
    c2 = count2[owner]
    i1 = np.asarray(start1, dtype=np.int64)[owner] + local // np.maximum(c2, 1)
    i2 = np.asarray(start2, dtype=np.int64)[owner] + local % np.maximum(c2, 1)
    return owner, i1, i2
