"""Seeded experiments, predictions, benchmarks and report output."""

from __future__ import annotations

import csv
import io
import itertools
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .analysis import RecurrenceTable
from .costmodel import COST_FIELDS, CostCounters, InstrumentedArray
from .kernels import bare_sort, fast_sort
from .rng import derive_seed, gen_keys
from .sortcore import SamplingScheme, check_pairing, default_scheme, quicksort

COUNTS_HEADER = ("algo", "scheme", "cost", "n", "trials", "seed", "mean", "min", "max", "normalized")
BENCH_HEADER = ("algo", "scheme", "n", "trials", "seed", "mean_ns", "min_ns", "max_ns")
RECURRENCE_HEADER = ("n", "value")


class UnsortedOutputError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str = "dual"
    scheme: SamplingScheme | None = None
    costs: tuple[str, ...] = ("cmps", "scans", "swaps")
    sizes: tuple[int, ...] = (1000,)
    trials: int = 10
    seed: int = 0
    cutoff: int | None = None
    # keys drawn with repetition from 1..distinct instead of a permutation
    distinct: int | None = None
    # enumerate all n! permutations instead of sampling
    exhaustive: bool = False
    engine: str = "fast"
    workers: int = 1
    wallclock: bool = False

    def __post_init__(self) -> None:
        if self.scheme is None:
            object.__setattr__(self, "scheme", default_scheme(self.algorithm))
        check_pairing(self.algorithm, self.scheme)
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(n < 0 for n in self.sizes):
            raise ValueError("sizes must be nonnegative")
        for c in self.costs:
            if c not in COST_FIELDS:
                raise ValueError(f"unknown cost {c!r}")
        if self.exhaustive and any(n > 9 for n in self.sizes):
            raise ValueError("exhaustive runs are limited to n <= 9")
        if self.engine not in ("fast", "reference"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass
class CounterStats:
    cost: str
    n: int
    trials: int
    total: int
    min: int
    max: int

    @property
    def exact_mean(self) -> Fraction:
        return Fraction(self.total, self.trials)

    @property
    def mean(self) -> float:
        return self.total / self.trials

    @property
    def normalized(self) -> float | None:
        if self.n < 2:
            return None
        return self.mean / (self.n * math.log(self.n))


@dataclass
class WallStats:
    n: int
    samples_ns: list[int]

    @property
    def mean_ns(self) -> float:
        return sum(self.samples_ns) / len(self.samples_ns)

    @property
    def min_ns(self) -> int:
        return min(self.samples_ns)

    @property
    def max_ns(self) -> int:
        return max(self.samples_ns)


@dataclass
class TrialSummary:
    config: ExperimentConfig
    stats: dict[tuple[str, int], CounterStats] = field(default_factory=dict)
    wall: dict[int, WallStats] = field(default_factory=dict)

    def get(self, cost: str, n: int) -> CounterStats:
        try:
            return self.stats[cost, n]
        except KeyError:
            raise KeyError(f"no {cost!r} statistics for n={n}") from None

    def rows(self) -> list[tuple]:
        """Counts CSV rows in schema order, sizes outer, costs inner."""
        cfg = self.config
        out = []
        for n in cfg.sizes:
            for cost in cfg.costs:
                s = self.stats[cost, n]
                norm = "" if s.normalized is None else f"{s.normalized:.6f}"
                out.append((cfg.algorithm, str(cfg.scheme), cost, n, s.trials, cfg.seed,
                            f"{s.mean:.6f}", s.min, s.max, norm))
        return out

    def bench_rows(self) -> list[tuple]:
        cfg = self.config
        return [(cfg.algorithm, str(cfg.scheme), n, len(w.samples_ns), cfg.seed,
                 f"{w.mean_ns:.0f}", w.min_ns, w.max_ns)
                for n, w in sorted(self.wall.items())]


def _inputs(cfg: ExperimentConfig, n: int) -> Iterator[np.ndarray]:
    if cfg.exhaustive:
        for perm in itertools.permutations(range(1, n + 1)):
            yield np.array(perm, dtype=np.int64)
    else:
        for trial in range(cfg.trials):
            yield gen_keys(n, derive_seed(cfg.seed, n, trial), cfg.distinct)


def _run_one(cfg: ExperimentConfig, keys: np.ndarray) -> CostCounters:
    expected = np.sort(keys)
    if cfg.engine == "fast":
        out = keys.copy()
        counters = fast_sort(out, cfg.algorithm, cfg.scheme, cfg.cutoff)
    else:
        arr = InstrumentedArray(keys.tolist())
        quicksort(arr, cfg.algorithm, cfg.scheme, cfg.cutoff)
        out = np.array(arr.to_list(), dtype=np.int64)
        counters = arr.snapshot()
    if not np.array_equal(out, expected):
        bad = int(np.argmax(out != expected))
        raise UnsortedOutputError(
            f"{cfg.algorithm}/{cfg.scheme} produced wrong output for n={len(keys)}: "
            f"first mismatch at index {bad} (got {out[bad]}, want {expected[bad]})"
        )
    return counters


def run_experiment(config: ExperimentConfig) -> TrialSummary:
    """Sort seeded random inputs (or all permutations) and aggregate the counters.

    Every output is checked against ``np.sort`` of its input.  Aggregation is
    by sums and extrema only, so ``workers > 1`` yields identical numbers.
    """
    summary = TrialSummary(config)
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for n in config.sizes:
            inputs = _inputs(config, n)
            if pool is None:
                results: Iterable[CostCounters] = (_run_one(config, k) for k in inputs)
            else:
                results = pool.map(lambda k: _run_one(config, k), inputs)
            totals = {c: 0 for c in config.costs}
            lo = {c: None for c in config.costs}
            hi = {c: None for c in config.costs}
            count = 0
            for counters in results:
                count += 1
                for c in config.costs:
                    v = counters.get(c)
                    totals[c] += v
                    lo[c] = v if lo[c] is None else min(lo[c], v)
                    hi[c] = v if hi[c] is None else max(hi[c], v)
            for c in config.costs:
                summary.stats[c, n] = CounterStats(c, n, count, totals[c], lo[c], hi[c])
    finally:
        if pool is not None:
            pool.shutdown()
    return summary


@dataclass
class Deviation:
    n: int
    empirical: float | Fraction
    predicted: float | Fraction
    abs_dev: float | Fraction
    rel_dev: float | Fraction
    flagged: bool


def compare_to_prediction(
    summary: TrialSummary, table: RecurrenceTable, tolerance: float = 0.01
) -> list[Deviation]:
    """Join empirical means with recurrence values; flag relative deviations above ``tolerance``."""
    cost = table.cost
    if cost not in summary.config.costs:
        raise KeyError(f"summary has no {cost!r} statistics")
    exact = table.exact and summary.config.exhaustive
    rows = []
    for n in summary.config.sizes:
        if n > table.horizon:
            raise ValueError(f"table horizon {table.horizon} does not cover n={n}")
        s = summary.get(cost, n)
        emp = s.exact_mean if exact else s.mean
        pred = table[n] if exact else float(table[n])
        abs_dev = abs(emp - pred)
        rel_dev = abs_dev / abs(pred) if pred else abs_dev
        rows.append(Deviation(n, emp, pred, abs_dev, rel_dev, rel_dev > tolerance))
    return rows


def bench_wallclock(config: ExperimentConfig, warmup: int = 1) -> TrialSummary:
    """Time the uninstrumented kernel; ``warmup`` extra runs per size are discarded."""
    summary = TrialSummary(config)
    for n in config.sizes:
        samples = []
        for trial in range(-warmup, config.trials):
            keys = gen_keys(n, derive_seed(config.seed, n, max(trial, 0)), config.distinct)
            expected = np.sort(keys)
            t0 = time.perf_counter_ns()
            bare_sort(keys, config.algorithm, config.scheme, config.cutoff)
            elapsed = time.perf_counter_ns() - t0
            if not np.array_equal(keys, expected):
                raise UnsortedOutputError(f"benchmark sort of n={n} produced wrong output")
            if trial >= 0:
                samples.append(elapsed)
        summary.wall[n] = WallStats(n, samples)
    return summary


# -- output -----------------------------------------------------------------


@contextmanager
def _open_text(destination) -> Iterator[io.TextIOBase]:
    if destination is None or destination == "-":
        yield sys.stdout
    elif hasattr(destination, "write"):
        yield destination
    else:
        path = Path(destination)
        try:
            fh = path.open("w", newline="")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        with fh:
            yield fh


def emit_csv(rows: Iterable[Sequence], destination, header: Sequence[str] = COUNTS_HEADER, fmt: str = "csv") -> None:
    """Write ``header`` then ``rows``; ``destination`` is a path, a file object, or ``-``."""
    if fmt not in ("csv", "tsv"):
        raise ValueError(f"unknown format {fmt!r}")
    with _open_text(destination) as fh:
        w = csv.writer(fh, delimiter="\t" if fmt == "tsv" else ",", lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


@dataclass
class Series:
    label: str
    points: list[tuple[int, float]]


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def emit_svg_chart(
    series: Sequence[Series],
    destination,
    asymptotes: Sequence[tuple[str, float]] = (),
    title: str = "",
    y_label: str = "mean / (n ln n)",
    width: int = 720,
    height: int = 440,
) -> None:
    """Normalized cost against log2 n, one polyline per series, dashed asymptotes."""
    pts = [(math.log2(n), y) for s in series for n, y in s.points]
    ys = [y for _, y in pts] + [y for _, y in asymptotes]
    if not ys:
        raise ValueError("nothing to plot")
    xs = [x for x, _ in pts] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x1 = x0 + 1
    y0, y1 = min(ys), max(ys)
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    ml, mr, mt, mb = 70, 170, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return mt + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml}" y="{mt - 15}" font-size="14">{_esc(title)}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for k in range(math.ceil(x0), math.floor(x1) + 1):
        out.append(f'<line x1="{sx(k):.2f}" y1="{mt + ph}" x2="{sx(k):.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(k):.2f}" y="{mt + ph + 18}" text-anchor="middle">2^{k}</text>')
    for i in range(6):
        y = y0 + (y1 - y0) * i / 5
        out.append(f'<line x1="{ml - 5}" y1="{sy(y):.2f}" x2="{ml}" y2="{sy(y):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{sy(y) + 4:.2f}" text-anchor="end">{y:.3f}</text>')
    out.append(f'<text x="{ml + pw / 2:.2f}" y="{height - 10}" text-anchor="middle">n (log scale)</text>')
    out.append(f'<text x="15" y="{mt + ph / 2:.2f}" transform="rotate(-90 15 {mt + ph / 2:.2f})" '
               f'text-anchor="middle">{_esc(y_label)}</text>')
    for i, (label, y) in enumerate(asymptotes):
        color = _PALETTE[i % len(_PALETTE)]
        out.append(f'<line class="asymptote" x1="{ml}" y1="{sy(y):.2f}" x2="{ml + pw}" y2="{sy(y):.2f}" '
                   f'stroke="{color}" stroke-dasharray="6 4"/>')
        out.append(f'<text x="{ml + pw + 6}" y="{sy(y) + 4:.2f}" fill="{color}">{_esc(label)} = {y:.4f}</text>')
    for i, s in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(math.log2(n)):.2f},{sy(y):.2f}" for n, y in s.points)
        out.append(f'<polyline class="series" points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        ly = mt + ph - 18 * (len(series) - 1 - i)
        out.append(f'<text x="{ml + pw + 6}" y="{ly}" fill="{color}">{_esc(s.label)}</text>')
    out.append("</svg>")
    with _open_text(destination) as fh:
        fh.write("\n".join(out) + "\n")


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def normalized_series(summary: TrialSummary, cost: str, label: str | None = None) -> Series:
    cfg = summary.config
    pts = [(n, summary.get(cost, n).normalized) for n in cfg.sizes if n >= 2]
    return Series(label or f"{cfg.algorithm} {cfg.scheme} {cost}", pts)
