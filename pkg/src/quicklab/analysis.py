"""Expected-cost recurrences for sampled classic and dual-pivot Quicksort.

Classic Quicksort with the pivot chosen as median of ``2t+1`` satisfies::

    c_n = toll(n) + sum_{j1+j2=n-1} C(j1,t) C(j2,t) / C(n,2t+1) * (c_j1 + c_j2)

and Yaroslavskiy's algorithm with tertiles of ``3t+2``::

    c_n = toll(n) + sum_{j1+j2+j3=n-2} C(j1,t) C(j2,t) C(j3,t) / C(n,3t+2) * (c_j1 + c_j2 + c_j3)

Both are evaluated through the marginal law of a single segment, which makes
a full table O(N^2).  Tolls come either from the leading-order partitioning
cost (``AnalyticToll``) or from measurements of the actual implementation
(``EmpiricalToll``).  Below the sample size the implementation falls back to
unsampled pivots, and the recurrence follows it (``t = 0`` law).

The exhaustive oracle runs the instrumented sorter on all ``n!`` inputs.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping, Union

import numpy as np

from .costmodel import CostCounters, InstrumentedArray
from .kernels import fast_sort
from .rng import derive_seed, gen_permutation
from .sortcore import SamplingScheme, check_pairing, partition_step, quicksort

Number = Union[Fraction, float]

COST_KINDS = ("cmps", "scans")
NINTHER_CONSTANT = 1.5697
EXACT_HORIZON = 64
EXHAUSTIVE_LIMIT = 9


def _check_cost(cost: str) -> None:
    if cost not in COST_KINDS:
        raise ValueError(f"cost kind must be one of {COST_KINDS}, got {cost!r}")


def scheme_for(algorithm: str, t: int) -> SamplingScheme:
    """The sampling family a recurrence with parameter ``t`` describes."""
    return SamplingScheme.tertiles(t) if algorithm == "dual" else SamplingScheme.median(t)


def harmonic(n: int, exact: bool = True) -> Number:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if exact:
        return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))
    return math.fsum(1.0 / i for i in range(1, n + 1))


# -- leading-order analysis ---------------------------------------------------


def toll_coefficient(algorithm: str, cost: str, t: int) -> Fraction:
    """Leading coefficient ``a`` of the partitioning cost ``a*n + O(1)``."""
    _check_cost(cost)
    if algorithm == "classic":
        return Fraction(1)
    if algorithm == "dual":
        if cost == "cmps":
            return Fraction(5, 3) - Fraction(1, 9 * t + 12)
        # k and g sweep once, ell re-sweeps the leftmost third
        return Fraction(4, 3)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def analytic_toll(algorithm: str, cost: str, t: int, n: int) -> Fraction:
    if algorithm == "classic" and cost == "cmps":
        return Fraction(n - 1)
    return toll_coefficient(algorithm, cost, t) * n


def asymptotic_constant(algorithm: str, cost: str, scheme: SamplingScheme) -> float:
    """Coefficient of ``n ln n`` in the expected cost."""
    _check_cost(cost)
    check_pairing(algorithm, scheme)
    if scheme.kind == "ninther":
        return NINTHER_CONSTANT
    t = scheme.t
    a = toll_coefficient(algorithm, cost, t)
    m = 2 if algorithm == "classic" else 3
    return float(a / (harmonic(m * (t + 1)) - harmonic(t + 1)))


# -- segment sizes --------------------------------------------------------------


@dataclass(frozen=True)
class SegmentSizeDistribution:
    algorithm: str
    n: int
    t: int
    probs: tuple

    def __getitem__(self, j: int) -> Number:
        return self.probs[j]

    def __len__(self) -> int:
        return len(self.probs)

    def total(self) -> Number:
        return sum(self.probs, Fraction(0)) if isinstance(self.probs[0], Fraction) else math.fsum(self.probs)


def sample_size(algorithm: str, t: int) -> int:
    return 2 * t + 1 if algorithm == "classic" else 3 * t + 2


def segment_distribution(algorithm: str, n: int, t: int, exact: bool = True) -> SegmentSizeDistribution:
    """Law of the leftmost segment's size after one sampled partitioning step.

    Classic: ``C(j,t) C(n-1-j,t) / C(n,2t+1)`` on ``0..n-1``.  Dual: the
    marginal of the three-segment law, ``C(j,t) C(n-1-j,2t+1) / C(n,3t+2)``
    on ``0..n-2``.
    """
    k = sample_size(algorithm, t)
    if n < k:
        raise ValueError(f"n={n} is below the sample size {k}")
    other = t if algorithm == "classic" else 2 * t + 1
    top = n if algorithm == "classic" else n - 1
    denom = math.comb(n, k)
    probs = [Fraction(math.comb(j, t) * math.comb(n - 1 - j, other), denom) for j in range(top)]
    if not exact:
        probs = [float(p) for p in probs]
    return SegmentSizeDistribution(algorithm, n, t, tuple(probs))


def joint_segment_probability(n: int, t: int, j1: int, j2: int, j3: int) -> Fraction:
    """Dual-pivot joint law of the three segment sizes (zero unless they sum to n-2)."""
    if j1 + j2 + j3 != n - 2 or min(j1, j2, j3) < 0:
        return Fraction(0)
    num = math.comb(j1, t) * math.comb(j2, t) * math.comb(j3, t)
    return Fraction(num, math.comb(n, 3 * t + 2))


# -- recurrence tables --------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticToll:
    """Partitioning cost taken as its leading term (``n - 1`` for classic comparisons)."""

    label = "analytic"


@dataclass(frozen=True)
class EmpiricalToll:
    """Measured partitioning costs ``n -> E[toll]``, plus optional stitched base values."""

    tolls: Mapping[int, Number]
    base: Mapping[int, Number] = field(default_factory=dict)
    label = "empirical"


TollMode = Union[AnalyticToll, EmpiricalToll]


@dataclass
class RecurrenceTable:
    algorithm: str
    cost: str
    t: int
    toll: str
    values: list | np.ndarray

    @property
    def exact(self) -> bool:
        return not isinstance(self.values, np.ndarray)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Number:
        if not 0 <= n <= self.horizon:
            raise IndexError(f"n={n} outside table horizon {self.horizon}")
        v = self.values[n]
        return v if self.exact else float(v)

    def rows(self) -> list[tuple[int, Number]]:
        return [(n, self[n]) for n in range(len(self.values))]

    def to_csv(self, destination, delimiter: str = ",") -> None:
        path = Path(destination)
        try:
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
                w.writerow(["n", "value"])
                for n, v in self.rows():
                    w.writerow([n, format_value(v)])
        except OSError as exc:
            raise OSError(f"cannot write recurrence table to {path}: {exc}") from exc


def format_value(v: Number) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _toll_fn(algorithm: str, cost: str, t: int, mode: TollMode, N: int, exact: bool) -> Callable[[int], Number]:
    if isinstance(mode, AnalyticToll):
        if exact:
            return lambda n: analytic_toll(algorithm, cost, t, n)
        return lambda n: float(analytic_toll(algorithm, cost, t, n))
    missing = [n for n in range(2, N + 1) if n not in mode.tolls and n not in mode.base]
    if missing:
        raise ValueError(f"empirical toll table does not cover n={missing[:5]}")
    if exact:
        return lambda n: Fraction(mode.tolls[n])
    return lambda n: float(mode.tolls[n])


def exact_recurrence(
    algorithm: str,
    cost: str,
    t: int,
    toll_mode: TollMode,
    N: int,
    exact: bool | None = None,
) -> RecurrenceTable:
    """Tabulate ``c_0..c_N`` bottom-up.

    ``exact`` defaults to rational arithmetic for ``N <= 64`` when every
    toll is exact, and double precision otherwise.
    """
    _check_cost(cost)
    if algorithm not in ("classic", "dual"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if exact is None:
        exact = N <= EXACT_HORIZON and (
            isinstance(toll_mode, AnalyticToll)
            or all(isinstance(v, (int, Fraction)) for v in (*toll_mode.tolls.values(), *toll_mode.base.values()))
        )
    toll = _toll_fn(algorithm, cost, t, toll_mode, N, exact)
    base = toll_mode.base if isinstance(toll_mode, EmpiricalToll) else {}
    solve = _solve_rational if exact else _solve_float
    values = solve(algorithm, t, N, toll, base)
    return RecurrenceTable(algorithm, cost, t, toll_mode.label, values)


def _solve_rational(algorithm, t, N, toll, base) -> list[Fraction]:
    m = 2 if algorithm == "classic" else 3
    c = [Fraction(0)] * (N + 1)
    for n in range(2, N + 1):
        if n in base:
            c[n] = Fraction(base[n])
            continue
        tn = t if n >= sample_size(algorithm, t) else 0
        dist = segment_distribution(algorithm, n, tn)
        c[n] = toll(n) + m * sum((p * c[j] for j, p in enumerate(dist.probs)), Fraction(0))
    return c


def _binomial_column(N: int, t: int) -> np.ndarray:
    # C(j, t) for j = 0..N; a factor (j - i) vanishes for every j < t
    j = np.arange(N + 1, dtype=np.float64)
    out = np.ones(N + 1)
    for i in range(t):
        out *= (j - i) / (i + 1)
    return out


def _solve_float(algorithm, t, N, toll, base) -> np.ndarray:
    m = 2 if algorithm == "classic" else 3
    c = np.zeros(N + 1)
    laws = []
    for tt in sorted({0, t}):
        k = sample_size(algorithm, tt)
        other = tt if algorithm == "classic" else 2 * tt + 1
        # rev[N - i] = C(i, other), so C(n-1-j, other) for j = 0..n-1 is rev[N-n+1 : N+1]
        rev = _binomial_column(N, other)[::-1].copy()
        laws.append((tt, k, _binomial_column(N, tt), rev, np.zeros(N + 1)))
    for n in range(2, N + 1):
        if n in base:
            c[n] = float(base[n])
        else:
            tn = t if n >= sample_size(algorithm, t) else 0
            _, k, _, rev, w = next(law for law in laws if law[0] == tn)
            s = np.dot(w[:n], rev[N - n + 1:N + 1])
            c[n] = toll(n) + m * s / math.comb(n, k)
        for _, _, col, _, w in laws:
            w[n] = col[n] * c[n]
    return c


def leading_constant_estimate(table: RecurrenceTable, n: int) -> float:
    """Estimate the ``n ln n`` coefficient as ``(c_2n - 2 c_n) / (2 n ln 2)``.

    The difference cancels the linear term of ``a n ln n + b n + o(n)``.
    """
    if n < 1 or 2 * n > table.horizon:
        raise ValueError(f"need table up to {2 * n}, horizon is {table.horizon}")
    return float(table[2 * n] - 2 * table[n]) / (2 * n * math.log(2))


# -- the exhaustive oracle ---------------------------------------------------------


@lru_cache(maxsize=None)
def exhaustive_counts(
    algorithm: str, scheme: SamplingScheme, n: int, first_only: bool = False, engine: str = "fast"
) -> CostCounters:
    """Counter totals summed over all ``n!`` permutations of ``1..n``.

    ``first_only`` restricts each run to the top-level sampling and
    partitioning step.  ``engine`` is ``"fast"`` (compiled kernel) or
    ``"reference"`` (:class:`InstrumentedArray`).
    """
    check_pairing(algorithm, scheme)
    if not 0 <= n <= EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_LIMIT}")
    total = CostCounters()
    for perm in itertools.permutations(range(1, n + 1)):
        if engine == "fast":
            total = total + fast_sort(np.array(perm, dtype=np.int64), algorithm, scheme, first_only=first_only)
        elif engine == "reference":
            arr = InstrumentedArray(perm)
            if first_only:
                if n >= 2:
                    partition_step(arr, 0, n - 1, algorithm, scheme)
            else:
                quicksort(arr, algorithm, scheme)
            total = total + arr.counters
        else:
            raise ValueError(f"unknown engine {engine!r}")
    return total


def exhaustive_expectation(
    algorithm: str, cost: str, scheme: SamplingScheme, n: int, engine: str = "fast"
) -> Fraction:
    """Exact mean of a counter over all permutations of ``1..n``."""
    total = exhaustive_counts(algorithm, scheme, n, False, engine)
    return Fraction(total.get(cost), math.factorial(n))


def empirical_toll(
    algorithm: str,
    cost: str,
    scheme: SamplingScheme,
    n: int,
    trials: int | None = None,
    seed: int = 0,
    engine: str = "fast",
) -> Number:
    """Expected cost of the first sampling-plus-partitioning step at size ``n``.

    Exhaustive (exact) when ``trials`` is None, otherwise a Monte Carlo mean
    over ``trials`` seeded permutations.
    """
    if n < 2:
        return Fraction(0)
    if trials is None:
        total = exhaustive_counts(algorithm, scheme, n, True, engine)
        return Fraction(total.get(cost), math.factorial(n))
    acc = 0
    for trial in range(trials):
        keys = gen_permutation(n, derive_seed(seed, n, trial))
        acc += fast_sort(keys, algorithm, scheme, first_only=True).get(cost)
    return acc / trials


def oracle_toll_mode(algorithm: str, cost: str, t: int, N: int, engine: str = "fast") -> EmpiricalToll:
    """Exhaustively measured tolls for ``2..N`` with oracle values stitched below ``n0``.

    ``n0`` is the sample size plus two.
    """
    scheme = scheme_for(algorithm, t)
    n0 = scheme.sample_size + 2
    tolls = {n: empirical_toll(algorithm, cost, scheme, n, engine=engine) for n in range(2, N + 1)}
    base = {n: exhaustive_expectation(algorithm, cost, scheme, n, engine) for n in range(2, min(n0, N + 1))}
    return EmpiricalToll(tolls, base)


def fitted_toll_mode(
    algorithm: str,
    cost: str,
    t: int,
    N: int,
    sizes: tuple[int, ...] = (256, 1024, 4096, 16384),
    trials: int = 400,
    seed: int = 0,
    exhaustive_upto: int = 8,
    direct_upto: int = 256,
    fit_trials: int = 4000,
) -> EmpiricalToll:
    """Empirical tolls for large horizons.

    Exact up to ``exhaustive_upto``, Monte Carlo means for every size up to
    ``direct_upto`` (``trials`` each), and beyond that an affine fit
    ``a*n + b`` to Monte Carlo means at ``sizes`` (``fit_trials`` each; the
    slope carries to every larger size, so it gets the bigger budget).  Small sizes are measured rather than fitted because
    sampling makes the toll visibly nonlinear there, and a table of size N
    spends O(N) subproblems in that range.
    """
    scheme = scheme_for(algorithm, t)
    tolls: dict[int, Number] = {}
    for n in range(2, min(exhaustive_upto, N) + 1):
        tolls[n] = empirical_toll(algorithm, cost, scheme, n)
    for n in range(exhaustive_upto + 1, min(direct_upto, N) + 1):
        tolls[n] = empirical_toll(algorithm, cost, scheme, n, trials=trials, seed=seed)
    if N > direct_upto:
        xs = np.array(sizes, dtype=float)
        ys = np.array([empirical_toll(algorithm, cost, scheme, n, trials=fit_trials, seed=seed) for n in sizes])
        a, b = np.polyfit(xs, ys, 1)
        for n in range(max(exhaustive_upto, direct_upto) + 1, N + 1):
            tolls[n] = a * n + b
    return EmpiricalToll(tolls)
