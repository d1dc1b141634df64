"""NumPy fallbacks for the compiled kernels."""

import numpy as np


def min_row_mismatch(rows, floor=0):
    """Minimum number of differing positions over all pairs of distinct rows.

    Stops early once ``floor`` is reached. Returns -1 for fewer than two rows.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    m, n = rows.shape
    if m < 2:
        return -1
    best = n + 1
    for i in range(m - 1):
        d = np.count_nonzero(rows[i + 1:] != rows[i], axis=1)
        d = d[d > 0]
        if d.size and d.min() < best:
            best = int(d.min())
            if best <= floor:
                return best
    return 0 if best == n + 1 else best


def inverse_cdf_counts(cdf, u):
    """Histogram of ``searchsorted(cdf, u, side='right')`` over outcome bins."""
    cdf = np.asarray(cdf, dtype=np.float64)
    idx = np.searchsorted(cdf, np.asarray(u, dtype=np.float64), side="right")
    np.minimum(idx, cdf.size - 1, out=idx)
    return np.bincount(idx, minlength=cdf.size).astype(np.int64)


def compatible_subsets(adjacency):
    """All nonempty subsets whose members are pairwise adjacent.

    ``adjacency[i]`` is the bitmask of items compatible with item ``i``.
    Result is ordered by subset size (descending), then mask (ascending).
    """
    adjacency = [int(a) for a in adjacency]
    n = len(adjacency)
    keep = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if all((mask & ~(1 << i)) & ~adjacency[i] == 0 for i in members):
            keep.append(mask)
    keep.sort(key=lambda x: (-bin(x).count("1"), x))
    return np.asarray(keep, dtype=np.int64)
