# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Signatures and results match ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def min_row_mismatch(const cnp.int64_t[:, ::1] rows, long floor=0):
    """Minimum number of differing positions over all pairs of distinct rows.

    Stops early once ``floor`` is reached. Returns -1 for fewer than two rows.
    """
    cdef Py_ssize_t m = rows.shape[0], n = rows.shape[1]
    cdef Py_ssize_t i, j, c
    cdef long best = -1, d
    if m < 2:
        return -1
    best = n + 1
    for i in range(m):
        for j in range(i + 1, m):
            d = 0
            for c in range(n):
                if rows[i, c] != rows[j, c]:
                    d += 1
                    if d >= best:
                        break
            if 0 < d < best:
                best = d
                if best <= floor:
                    return best
    if best == n + 1:
        return 0
    return best


def inverse_cdf_counts(const double[::1] cdf, const double[::1] u):
    """Histogram of ``searchsorted(cdf, u, side='right')`` over outcome bins."""
    cdef Py_ssize_t m = cdf.shape[0], n = u.shape[0]
    cdef Py_ssize_t t, lo, hi, mid
    cdef double x
    counts = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] cv = counts
    for t in range(n):
        x = u[t]
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) >> 1
            if cdf[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        if lo >= m:
            lo = m - 1
        cv[lo] += 1
    return counts


def compatible_subsets(const cnp.int64_t[::1] adjacency):
    """All nonempty subsets whose members are pairwise adjacent.

    ``adjacency[i]`` is the bitmask of items compatible with item ``i``.
    Result is ordered by subset size (descending), then mask (ascending).
    """
    cdef Py_ssize_t n = adjacency.shape[0]
    cdef long long mask, rest, full = (1LL << n)
    cdef Py_ssize_t i
    cdef bint ok
    keep = []
    for mask in range(1, full):
        ok = True
        rest = mask
        i = 0
        while rest:
            if rest & 1:
                if (mask & ~(1LL << i)) & ~adjacency[i]:
                    ok = False
                    break
            rest >>= 1
            i += 1
        if ok:
            keep.append(mask)
    out = np.asarray(keep, dtype=np.int64)
    sizes = np.array([bin(int(x)).count("1") for x in keep], dtype=np.int64)
    order = np.lexsort((out, -sizes))
    return out[order]
