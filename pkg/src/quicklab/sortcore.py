"""Classic and dual-pivot Quicksort with pivot sampling.

These are the reference sorters: they touch keys only through
:class:`~quicklab.costmodel.InstrumentedArray`.  The numba kernels in
:mod:`quicklab.kernels` mirror them step for step and must report identical
counters.

Subarrays smaller than a scheme's sample fall back to the unsampled variant
of the same family (``median:0`` for median/ninther, ``tertiles:0`` for
tertiles).  Sample positions are evenly spaced over the subarray, the sample
is sorted in place by an instrumented insertion sort, and the chosen order
statistics are swapped to the ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .costmodel import CostCounters, InstrumentedArray

Algorithm = Literal["classic", "dual"]
ALGORITHMS: tuple[str, ...] = ("classic", "dual")


@dataclass(frozen=True)
class SamplingScheme:
    """Pivot-selection policy.

    ``kind`` is ``"median"`` (median of 2t+1, classic), ``"tertiles"``
    (tertiles of 3t+2, dual) or ``"ninther"`` (median of three medians of
    three, classic).
    """

    kind: str
    t: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("median", "tertiles", "ninther"):
            raise ValueError(f"unknown sampling scheme {self.kind!r}")
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if self.kind == "ninther" and self.t != 0:
            raise ValueError("ninther takes no parameter")

    @classmethod
    def median(cls, t: int = 0) -> SamplingScheme:
        return cls("median", t)

    @classmethod
    def tertiles(cls, t: int = 0) -> SamplingScheme:
        return cls("tertiles", t)

    @classmethod
    def ninther(cls) -> SamplingScheme:
        return cls("ninther")

    @classmethod
    def parse(cls, text: str) -> SamplingScheme:
        """Parse ``median:t``, ``tertiles:t`` or ``ninther``."""
        kind, _, arg = text.strip().partition(":")
        if kind == "ninther":
            if arg:
                raise ValueError("ninther takes no parameter")
            return cls.ninther()
        return cls(kind, int(arg) if arg else 0)

    def __str__(self) -> str:
        return "ninther" if self.kind == "ninther" else f"{self.kind}:{self.t}"

    @property
    def algorithm(self) -> str:
        return "dual" if self.kind == "tertiles" else "classic"

    @property
    def sample_size(self) -> int:
        if self.kind == "median":
            return 2 * self.t + 1
        if self.kind == "tertiles":
            return 3 * self.t + 2
        return 9

    @property
    def unsampled(self) -> SamplingScheme:
        return SamplingScheme("tertiles", 0) if self.kind == "tertiles" else SamplingScheme("median", 0)

    def for_size(self, size: int) -> SamplingScheme:
        """The scheme actually applied to a subarray of ``size`` elements."""
        return self if size >= self.sample_size else self.unsampled


def default_scheme(algorithm: str) -> SamplingScheme:
    return SamplingScheme.tertiles(0) if algorithm == "dual" else SamplingScheme.median(0)


def check_pairing(algorithm: str, scheme: SamplingScheme) -> None:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if scheme.algorithm != algorithm:
        raise ValueError(f"scheme {scheme} cannot drive {algorithm} quicksort")


def sample_positions(left: int, right: int, k: int) -> list[int]:
    """Evenly spaced sample positions ``left + floor(i*(size-1)/(k-1))``."""
    if k == 1:
        return [left]
    span = right - left
    return [left + (i * span) // (k - 1) for i in range(k)]


def _sort_positions(arr: InstrumentedArray, positions: Sequence[int]) -> None:
    # swap-based insertion sort over an arbitrary increasing list of positions
    with arr.scope():
        a = arr.cursor("a")
        b = arr.cursor("b")
        for i in range(1, len(positions)):
            j = i
            while j > 0:
                a.pos = positions[j]
                b.pos = positions[j - 1]
                if not arr.lt(arr.read(a), arr.read(b)):
                    break
                arr.swap(a, b)
                j -= 1


def insertion_sort(arr: InstrumentedArray, left: int, right: int) -> None:
    """Sort ``A[left..right]`` by adjacent swaps."""
    if right > left:
        _sort_positions(arr, range(left, right + 1))


def select_pivots(arr: InstrumentedArray, left: int, right: int, scheme: SamplingScheme) -> None:
    """Move the sampled pivot(s) to ``left`` (and ``right`` for tertiles)."""
    scheme = scheme.for_size(right - left + 1)
    t = scheme.t
    if scheme.kind == "median":
        if t == 0:
            return
        pos = sample_positions(left, right, scheme.sample_size)
        _sort_positions(arr, pos)
        with arr.scope():
            arr.swap(arr.cursor("left", left), arr.cursor("sample", pos[t]))
    elif scheme.kind == "tertiles":
        pos = sample_positions(left, right, scheme.sample_size)
        _sort_positions(arr, pos)
        if t == 0:
            return
        with arr.scope():
            s = arr.cursor("sample", pos[t])
            arr.swap(arr.cursor("left", left), s)
            s.pos = pos[2 * t + 1]
            arr.swap(arr.cursor("right", right), s)
    else:
        pos = sample_positions(left, right, 9)
        for g in range(0, 9, 3):
            _sort_positions(arr, pos[g:g + 3])
        _sort_positions(arr, pos[1::3])
        with arr.scope():
            arr.swap(arr.cursor("left", left), arr.cursor("sample", pos[4]))


def classic_partition(arr: InstrumentedArray, left: int, right: int) -> int:
    """Crossing-pointer partition around the pivot at ``left``.

    Returns the pivot's final position.
    """
    if right < left:
        raise ValueError(f"empty range [{left}, {right}]")
    with arr.partition_scope():
        lc = arr.cursor("left", left)
        p = arr.read(lc)
        i = arr.cursor("i", left + 1)
        j = arr.cursor("j", right)
        while True:
            while i.pos <= right and arr.lt(arr.read(i), p):
                i.pos += 1
            # A[left] == p stops j
            while arr.gt(arr.read(j), p):
                j.pos -= 1
            if i.pos >= j.pos:
                break
            arr.swap(i, j)
            i.pos += 1
            j.pos -= 1
        if j.pos != left:
            arr.swap(lc, j)
        return j.pos


def dual_partition(arr: InstrumentedArray, left: int, right: int) -> tuple[int, int]:
    """Yaroslavskiy's partition with pivots taken from ``A[left]``, ``A[right]``.

    Returns the final positions ``(ell, g)`` of the small and large pivot.
    """
    if right - left < 1:
        raise ValueError(f"dual partition needs at least two elements, got [{left}, {right}]")
    with arr.partition_scope():
        lc = arr.cursor("left", left)
        rc = arr.cursor("right", right)
        a, b = arr.read(lc), arr.read(rc)
        p, q = (b, a) if arr.lt(b, a) else (a, b)
        ell = arr.cursor("ell", left + 1)
        g = arr.cursor("g", right - 1)
        k = arr.cursor("k", left + 1)
        while k.pos <= g.pos:
            x = arr.read(k)
            if arr.lt(x, p):
                arr.swap(k, ell)
                ell.pos += 1
            elif arr.ge(x, q):
                while arr.gt(arr.read(g), q) and k.pos < g.pos:
                    g.pos -= 1
                arr.swap(k, g)
                g.pos -= 1
                if arr.lt(arr.read(k), p):
                    arr.swap(k, ell)
                    ell.pos += 1
            k.pos += 1
        ell.pos -= 1
        g.pos += 1
        arr.place_pivot(lc, ell, p)
        arr.place_pivot(rc, g, q)
        return ell.pos, g.pos


def partition_step(
    arr: InstrumentedArray, left: int, right: int, algorithm: str, scheme: SamplingScheme
) -> list[tuple[int, int]]:
    """Sample, partition, and return the subranges to recurse on (left to right)."""
    select_pivots(arr, left, right, scheme)
    if algorithm == "classic":
        m = classic_partition(arr, left, right)
        return [(left, m - 1), (m + 1, right)]
    ell, g = dual_partition(arr, left, right)
    return [(left, ell - 1), (ell + 1, g - 1), (g + 1, right)]


def quicksort(
    arr: InstrumentedArray,
    algorithm: str = "dual",
    scheme: SamplingScheme | None = None,
    cutoff: int | None = None,
) -> None:
    """Sort ``arr`` in place.

    Subarrays are processed depth-first, left segment first, exactly in the
    order a recursive implementation would visit them.  With ``cutoff`` set,
    subarrays of at most that many elements are insertion sorted instead.
    """
    scheme = scheme or default_scheme(algorithm)
    check_pairing(algorithm, scheme)
    stack = [(0, len(arr) - 1)]
    while stack:
        left, right = stack.pop()
        size = right - left + 1
        if size < 2:
            continue
        if cutoff and size <= cutoff:
            insertion_sort(arr, left, right)
            continue
        stack.extend(reversed(partition_step(arr, left, right, algorithm, scheme)))


def sort_keys(
    keys: Sequence[int],
    algorithm: str = "dual",
    scheme: SamplingScheme | None = None,
    cutoff: int | None = None,
) -> tuple[list[int], CostCounters]:
    """Convenience wrapper: sort a copy of ``keys`` and return it with its counters."""
    arr = InstrumentedArray(keys)
    quicksort(arr, algorithm, scheme, cutoff)
    return arr.to_list(), arr.snapshot()

