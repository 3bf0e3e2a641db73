"""Deterministic blocked summation.

Series sums are reduced in fixed-size blocks taken in canonical order;
block partial sums may be computed by any number of worker threads, but
they are always combined sequentially in block order.  The result is
therefore bit-identical for every thread count, which the batch front-end
relies on for reproducible output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 8192


def blocked_sum(values: np.ndarray, threads: int = 1, block: int = BLOCK):
    """Sum of a 1-d array, reproducible across runs and thread counts."""
    values = np.asarray(values)
    n = values.size
    if n == 0:
        return values.dtype.type(0)
    edges = range(0, n, block)
    if threads > 1 and n > block:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda i: np.add.reduce(values[i : i + block]), edges))
    else:
        partials = [np.add.reduce(values[i : i + block]) for i in edges]
    total = partials[0]
    for p in partials[1:]:
        total = total + p
    return total
