"""Instrumented array with named cursors.

Every key access made by the sorters goes through :class:`InstrumentedArray`.
Three quantities are tallied:

* key comparisons (``lt``/``le``/``gt``/``ge``),
* swaps (``swap`` and ``place_pivot``),
* scanned elements: one unit per (cursor, position) pair.  Repeated accesses
  through the same cursor at an unchanged position count once, reads and
  writes are not distinguished, and two cursors touching the same position
  count twice.

Cursors live in scopes.  Each partitioning step (and each sampling or
insertion-sort helper) opens a fresh scope, so a subarray rescanned by a
recursive call pays again.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from typing import Iterable, Iterator

# CLI/CSV cost names -> counter attribute
COST_FIELDS = {
    "cmps": "comparisons",
    "swaps": "swaps",
    "scans": "scanned_elements",
}


@dataclass
class CostCounters:
    comparisons: int = 0
    swaps: int = 0
    scanned_elements: int = 0
    partition_calls: int = 0

    def get(self, cost: str) -> int:
        """Counter value by CLI name (``cmps``, ``swaps``, ``scans``) or attribute name."""
        return getattr(self, COST_FIELDS.get(cost, cost))

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __add__(self, other: CostCounters) -> CostCounters:
        return CostCounters(**{k: v + getattr(other, k) for k, v in self.as_dict().items()})


class Cursor:
    """A reified index variable.

    ``pos`` is moved freely by the algorithm; ``last`` remembers the position
    of the most recent counted access.
    """

    __slots__ = ("name", "pos", "last")

    def __init__(self, name: str, pos: int) -> None:
        self.name = name
        self.pos = pos
        self.last: int | None = None

    def __repr__(self) -> str:
        return f"Cursor({self.name!r}, pos={self.pos})"


class InstrumentedArray:
    """Key array whose only access path is through counted operations."""

    def __init__(self, keys: Iterable[int]) -> None:
        self._keys = list(keys)
        self.counters = CostCounters()
        self._scopes: list[dict[str, Cursor]] = []

    def __len__(self) -> int:
        return len(self._keys)

    def __repr__(self) -> str:
        return f"InstrumentedArray(n={len(self._keys)}, {self.counters})"

    def to_list(self) -> list[int]:
        """Uncounted copy of the keys, for inspecting results after a run."""
        return list(self._keys)

    # -- cursors ---------------------------------------------------------

    @contextmanager
    def scope(self) -> Iterator[None]:
        """Open a fresh cursor namespace; cursors created inside die on exit."""
        self._scopes.append({})
        try:
            yield
        finally:
            self._scopes.pop()

    @contextmanager
    def partition_scope(self) -> Iterator[None]:
        self.counters.partition_calls += 1
        with self.scope():
            yield

    def cursor(self, name: str, pos: int = 0) -> Cursor:
        if not self._scopes:
            raise RuntimeError("cursor() called outside of a scope")
        active = self._scopes[-1]
        if name in active:
            raise ValueError(f"cursor {name!r} already active in this scope")
        c = Cursor(name, pos)
        active[name] = c
        return c

    def active_cursors(self) -> list[str]:
        return list(self._scopes[-1]) if self._scopes else []

    def _touch(self, c: Cursor) -> int:
        pos = c.pos
        if not 0 <= pos < len(self._keys):
            raise IndexError(f"cursor {c.name!r} at {pos} outside [0, {len(self._keys)})")
        if pos != c.last:
            self.counters.scanned_elements += 1
            c.last = pos
        return pos

    # -- element access --------------------------------------------------

    def read(self, c: Cursor) -> int:
        return self._keys[self._touch(c)]

    def write(self, c: Cursor, key: int) -> None:
        self._keys[self._touch(c)] = key

    def swap(self, c1: Cursor, c2: Cursor) -> None:
        i, j = self._touch(c1), self._touch(c2)
        keys = self._keys
        keys[i], keys[j] = keys[j], keys[i]
        self.counters.swaps += 1

    def place_pivot(self, end: Cursor, dest: Cursor, pivot: int) -> None:
        """``A[end] <- A[dest]; A[dest] <- pivot``, counted as one swap.

        This is how a pivot held in a local variable is moved to its final
        slot while the element occupying that slot goes to the array end.
        """
        self.write(end, self.read(dest))
        self.write(dest, pivot)
        self.counters.swaps += 1

    # -- comparisons -----------------------------------------------------

    def lt(self, a: int, b: int) -> bool:
        self.counters.comparisons += 1
        return a < b

    def le(self, a: int, b: int) -> bool:
        self.counters.comparisons += 1
        return a <= b

    def gt(self, a: int, b: int) -> bool:
        self.counters.comparisons += 1
        return a > b

    def ge(self, a: int, b: int) -> bool:
        self.counters.comparisons += 1
        return a >= b

    # -- tallies ---------------------------------------------------------

    def snapshot(self) -> CostCounters:
        return replace(self.counters)

    def reset(self) -> None:
        self.counters = CostCounters()
