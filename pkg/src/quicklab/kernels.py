"""Compiled mirrors of the reference sorters.

The same source is compiled twice by :func:`_make_kernels`: once with
counting enabled (used for Monte Carlo and exhaustive runs) and once with all
bookkeeping stripped (used for wall-clock benchmarks).  The counting kernel
reproduces the reference sorters' comparisons, swaps, scans and partition
calls exactly; ``tests/test_kernels.py`` holds it to that.

Counter slots in the ``cnt`` array: 0 comparisons, 1 swaps, 2 scanned
elements, 3 partition calls.  Cursor bookkeeping is a local ``last`` index
per cursor, reset at the start of each helper (one helper == one scope).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .costmodel import CostCounters
from .sortcore import SamplingScheme, check_pairing, default_scheme

KIND_CODES = {"median": 0, "tertiles": 1, "ninther": 2}
ALGO_CODES = {"classic": 0, "dual": 1}


def _make_kernels(count: bool):
    wrap = njit(nogil=True, cache=True)

    @wrap
    def touch(cnt, pos, last):
        if count and pos != last:
            cnt[2] += 1
        return pos

    @wrap
    def cmp_lt(cnt, a, b):
        if count:
            cnt[0] += 1
        return a < b

    @wrap
    def cmp_gt(cnt, a, b):
        if count:
            cnt[0] += 1
        return a > b

    @wrap
    def cmp_ge(cnt, a, b):
        if count:
            cnt[0] += 1
        return a >= b

    @wrap
    def swap(A, cnt, i, j):
        A[i], A[j] = A[j], A[i]
        if count:
            cnt[1] += 1

    @wrap
    def sort_positions(A, P, cnt):
        la = -1
        lb = -1
        for i in range(1, P.shape[0]):
            j = i
            while j > 0:
                pa = P[j]
                pb = P[j - 1]
                la = touch(cnt, pa, la)
                lb = touch(cnt, pb, lb)
                if not cmp_lt(cnt, A[pa], A[pb]):
                    break
                swap(A, cnt, pa, pb)
                j -= 1

    @wrap
    def insertion_sort(A, left, right, cnt):
        la = -1
        lb = -1
        for i in range(left + 1, right + 1):
            j = i
            while j > left:
                la = touch(cnt, j, la)
                lb = touch(cnt, j - 1, lb)
                if not cmp_lt(cnt, A[j], A[j - 1]):
                    break
                swap(A, cnt, j, j - 1)
                j -= 1

    @wrap
    def positions(left, right, k):
        P = np.empty(k, dtype=np.int64)
        if k == 1:
            P[0] = left
            return P
        span = right - left
        for i in range(k):
            P[i] = left + (i * span) // (k - 1)
        return P

    @wrap
    def select_pivots(A, left, right, kind, t, cnt):
        size = right - left + 1
        if kind == 0:
            k = 2 * t + 1
        elif kind == 1:
            k = 3 * t + 2
        else:
            k = 9
        if size < k:
            t = 0
            if kind == 2:
                kind = 0
        if kind == 0:
            if t == 0:
                return
            P = positions(left, right, 2 * t + 1)
            sort_positions(A, P, cnt)
            touch(cnt, left, -1)
            touch(cnt, P[t], -1)
            swap(A, cnt, left, P[t])
        elif kind == 1:
            P = positions(left, right, 3 * t + 2)
            sort_positions(A, P, cnt)
            if t == 0:
                return
            touch(cnt, left, -1)
            touch(cnt, P[t], -1)
            swap(A, cnt, left, P[t])
            touch(cnt, right, -1)
            touch(cnt, P[2 * t + 1], P[t])
            swap(A, cnt, right, P[2 * t + 1])
        else:
            P = positions(left, right, 9)
            sort_positions(A, P[0:3], cnt)
            sort_positions(A, P[3:6], cnt)
            sort_positions(A, P[6:9], cnt)
            sort_positions(A, P[1::3], cnt)
            touch(cnt, left, -1)
            touch(cnt, P[4], -1)
            swap(A, cnt, left, P[4])

    @wrap
    def classic_partition(A, left, right, cnt):
        if count:
            cnt[3] += 1
        lleft = touch(cnt, left, -1)
        p = A[left]
        i = left + 1
        j = right
        li = -1
        lj = -1
        while True:
            while i <= right:
                li = touch(cnt, i, li)
                if not cmp_lt(cnt, A[i], p):
                    break
                i += 1
            while True:
                lj = touch(cnt, j, lj)
                if not cmp_gt(cnt, A[j], p):
                    break
                j -= 1
            if i >= j:
                break
            li = touch(cnt, i, li)
            lj = touch(cnt, j, lj)
            swap(A, cnt, i, j)
            i += 1
            j -= 1
        if j != left:
            touch(cnt, left, lleft)
            touch(cnt, j, lj)
            swap(A, cnt, left, j)
        return j

    @wrap
    def dual_partition(A, left, right, cnt):
        if count:
            cnt[3] += 1
        lleft = touch(cnt, left, -1)
        lright = touch(cnt, right, -1)
        a = A[left]
        b = A[right]
        if cmp_lt(cnt, b, a):
            p = b
            q = a
        else:
            p = a
            q = b
        ell = left + 1
        g = right - 1
        k = ell
        lell = -1
        lg = -1
        lk = -1
        while k <= g:
            lk = touch(cnt, k, lk)
            x = A[k]
            if cmp_lt(cnt, x, p):
                lell = touch(cnt, ell, lell)
                swap(A, cnt, k, ell)
                ell += 1
            elif cmp_ge(cnt, x, q):
                while True:
                    lg = touch(cnt, g, lg)
                    if not cmp_gt(cnt, A[g], q):
                        break
                    if not k < g:
                        break
                    g -= 1
                lg = touch(cnt, g, lg)
                swap(A, cnt, k, g)
                g -= 1
                if cmp_lt(cnt, A[k], p):
                    lell = touch(cnt, ell, lell)
                    swap(A, cnt, k, ell)
                    ell += 1
            k += 1
        ell -= 1
        g += 1
        # A[left] <- A[ell]; A[ell] <- p
        lell = touch(cnt, ell, lell)
        lleft = touch(cnt, left, lleft)
        A[left] = A[ell]
        A[ell] = p
        # A[right] <- A[g]; A[g] <- q
        lg = touch(cnt, g, lg)
        lright = touch(cnt, right, lright)
        A[right] = A[g]
        A[g] = q
        if count:
            cnt[1] += 2
        return ell, g

    @wrap
    def quicksort(A, algo, kind, t, cutoff, cnt, first_only):
        n = A.shape[0]
        if n < 2:
            return
        stack = np.empty((n // 2 + 2, 2), dtype=np.int64)
        stack[0, 0] = 0
        stack[0, 1] = n - 1
        top = 1
        while top > 0:
            top -= 1
            left = stack[top, 0]
            right = stack[top, 1]
            if cutoff > 0 and right - left + 1 <= cutoff:
                insertion_sort(A, left, right, cnt)
                continue
            select_pivots(A, left, right, kind, t, cnt)
            if algo == 0:
                m = classic_partition(A, left, right, cnt)
                if first_only:
                    return
                # push right first so the left segment is processed first
                if right - (m + 1) >= 1:
                    stack[top, 0] = m + 1
                    stack[top, 1] = right
                    top += 1
                if (m - 1) - left >= 1:
                    stack[top, 0] = left
                    stack[top, 1] = m - 1
                    top += 1
            else:
                ell, g = dual_partition(A, left, right, cnt)
                if first_only:
                    return
                if right - (g + 1) >= 1:
                    stack[top, 0] = g + 1
                    stack[top, 1] = right
                    top += 1
                if (g - 1) - (ell + 1) >= 1:
                    stack[top, 0] = ell + 1
                    stack[top, 1] = g - 1
                    top += 1
                if (ell - 1) - left >= 1:
                    stack[top, 0] = left
                    stack[top, 1] = ell - 1
                    top += 1

    return quicksort


_counting_quicksort = _make_kernels(True)
_bare_quicksort = _make_kernels(False)


def _codes(algorithm: str, scheme: SamplingScheme | None) -> tuple[int, int, int]:
    scheme = scheme or default_scheme(algorithm)
    check_pairing(algorithm, scheme)
    return ALGO_CODES[algorithm], KIND_CODES[scheme.kind], scheme.t


def _as_keys(keys) -> np.ndarray:
    if not (isinstance(keys, np.ndarray) and keys.dtype == np.int64 and keys.flags.c_contiguous):
        raise TypeError("keys must be a C-contiguous int64 numpy array")
    return keys


def fast_sort(
    keys: np.ndarray,
    algorithm: str = "dual",
    scheme: SamplingScheme | None = None,
    cutoff: int | None = None,
    first_only: bool = False,
) -> CostCounters:
    """Sort ``keys`` in place with the counting kernel and return its counters.

    With ``first_only`` only the top-level sampling and partitioning step runs.
    """
    algo, kind, t = _codes(algorithm, scheme)
    cnt = np.zeros(4, dtype=np.int64)
    _counting_quicksort(_as_keys(keys), algo, kind, t, cutoff or 0, cnt, first_only)
    return CostCounters(int(cnt[0]), int(cnt[1]), int(cnt[2]), int(cnt[3]))


def bare_sort(
    keys: np.ndarray,
    algorithm: str = "dual",
    scheme: SamplingScheme | None = None,
    cutoff: int | None = None,
) -> None:
    """Sort ``keys`` in place without any bookkeeping."""
    algo, kind, t = _codes(algorithm, scheme)
    cnt = np.zeros(4, dtype=np.int64)
    _bare_quicksort(_as_keys(keys), algo, kind, t, cutoff or 0, cnt, False)
