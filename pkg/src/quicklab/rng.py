"""Reproducible input generation.

The generator is SplitMix64 (Steele, Lea and Flood, 2014; reference C code
by Vigna): state advances by 0x9E3779B97F4A7C15 and each output is the
state passed through the finalizer in :func:`mix64`.  Seeded with 1234567,
its first outputs are 6457827717110365317, 3203168211198807973,
9817491932198370423, 4593380528125082431, 16408922859458223821.

Bounded draws use rejection on the low residue: with
``threshold = 2**64 mod bound``, draw until ``r >= threshold`` and return
``r mod bound``.  Permutations are the Durstenfeld form of Fisher-Yates over
``1..n``: for ``i = n-1 .. 1`` swap ``a[i]`` with ``a[j]``, ``j`` uniform in
``0..i``.

Per-trial seeds come from :func:`derive_seed`: starting from the base seed,
each word ``w`` updates ``s <- mix64((s ^ w) + GOLDEN)`` modulo 2**64.
Together these fix every input byte for byte, independent of platform.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Pure-Python SplitMix64, the reference for the compiled shuffle."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def bounded(self, bound: int) -> int:
        threshold = (1 << 64) % bound
        while True:
            r = self.next()
            if r >= threshold:
                return r % bound


def derive_seed(seed: int, *words: int) -> int:
    s = seed & MASK
    for w in words:
        s = mix64(((s ^ (w & MASK)) + GOLDEN) & MASK)
    return s


_G = uint64(GOLDEN)
_M1 = uint64(0xBF58476D1CE4E5B9)
_M2 = uint64(0x94D049BB133111EB)
_S30 = uint64(30)
_S27 = uint64(27)
_S31 = uint64(31)


@njit(nogil=True, cache=True)
def _next(state):
    state = state + _G
    z = state
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return state, z ^ (z >> _S31)


@njit(nogil=True, cache=True)
def _bounded(state, bound):
    threshold = (uint64(0) - bound) % bound
    while True:
        state, r = _next(state)
        if r >= threshold:
            return state, r % bound


@njit(nogil=True, cache=True)
def _shuffled_range(n, seed):
    a = np.arange(1, n + 1, dtype=np.int64)
    state = uint64(seed)
    for i in range(n - 1, 0, -1):
        state, j = _bounded(state, uint64(i + 1))
        k = np.int64(j)
        a[i], a[k] = a[k], a[i]
    return a


@njit(nogil=True, cache=True)
def _uniform_keys(n, distinct, seed):
    a = np.empty(n, dtype=np.int64)
    state = uint64(seed)
    for i in range(n):
        state, r = _bounded(state, uint64(distinct))
        a[i] = np.int64(r) + 1
    return a


def gen_permutation(n: int, seed: int) -> np.ndarray:
    """A permutation of ``1..n`` as an int64 array, fixed by ``(n, seed)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _shuffled_range(n, np.uint64(seed & MASK))


def gen_keys(n: int, seed: int, distinct: int | None = None) -> np.ndarray:
    """Random permutation by default; with ``distinct`` set, i.i.d. keys in ``1..distinct``."""
    if distinct is None:
        return gen_permutation(n, seed)
    if distinct < 1:
        raise ValueError("distinct must be positive")
    return _uniform_keys(n, distinct, np.uint64(seed & MASK))
