"""Command line entry point: ``quicklab <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis
from .harness import (
    BENCH_HEADER,
    COUNTS_HEADER,
    RECURRENCE_HEADER,
    ExperimentConfig,
    bench_wallclock,
    emit_csv,
    emit_svg_chart,
    normalized_series,
    run_experiment,
)
from .kernels import fast_sort
from .rng import gen_keys
from .sortcore import SamplingScheme, sort_keys

HEADLINE = (("dual", "tertiles:1"), ("classic", "ninther"))


def _int(text: str) -> int:
    # accepts 1e6 and 2**20 style sizes
    if "**" in text:
        base, exp = text.split("**")
        return int(base) ** int(exp)
    return int(float(text))


def _sizes(text: str) -> tuple[int, ...]:
    return tuple(_int(s) for s in text.split(",") if s.strip())


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", choices=("classic", "dual"), default="dual")
    p.add_argument("--scheme", default=None, help="median:t | tertiles:t | ninther (default: unsampled)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=None, help="insertion-sort subarrays of at most this size")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")


def _scheme(args) -> SamplingScheme:
    scheme = SamplingScheme.parse(args.scheme) if args.scheme else None
    return scheme or (SamplingScheme.tertiles(0) if args.algo == "dual" else SamplingScheme.median(0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quicklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="sort one input and print its counters")
    _common(p)
    p.add_argument("--keys", default=None, help="comma-separated keys (default: random permutation)")
    p.add_argument("--n", type=_int, default=20)
    p.add_argument("--distinct", type=int, default=None)
    p.add_argument("--engine", choices=("fast", "reference"), default="reference")

    p = sub.add_parser("counts", help="run an experiment and write the counts CSV")
    _common(p)
    p.add_argument("--cost", default="cmps,scans,swaps", help="comma-separated subset of cmps,scans,swaps")
    p.add_argument("--sizes", type=_sizes, default=(1000,))
    p.add_argument("--n", type=_int, default=None, help="single size (overrides --sizes)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--distinct", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true", help="all n! permutations instead of --trials")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("recurrence", help="tabulate expected costs c_0..c_N")
    _common(p)
    p.add_argument("--cost", choices=analysis.COST_KINDS, default="cmps")
    p.add_argument("--n", type=_int, default=64, help="horizon N")
    p.add_argument("--toll", choices=("analytic", "empirical"), default="analytic")
    p.add_argument("--trials", type=int, default=400, help="Monte Carlo trials per fitted toll point")
    p.add_argument("--float", action="store_true", help="force double precision")

    p = sub.add_parser("asymptotic", help="print the n ln n coefficient")
    _common(p)
    p.add_argument("--cost", choices=analysis.COST_KINDS, default="cmps")

    p = sub.add_parser("oracle", help="exact mean over all permutations of 1..n")
    _common(p)
    p.add_argument("--cost", choices=("cmps", "scans", "swaps"), default="cmps")
    p.add_argument("--n", type=_int, default=6)
    p.add_argument("--engine", choices=("fast", "reference"), default="fast")

    p = sub.add_parser("toll", help="expected cost of the first partitioning step")
    _common(p)
    p.add_argument("--cost", choices=("cmps", "scans", "swaps"), default="scans")
    p.add_argument("--n", type=_int, default=8)
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials (default: exhaustive)")

    p = sub.add_parser("bench", help="wall-clock timing of the uninstrumented sorters")
    _common(p)
    p.set_defaults(algo=None)
    p.add_argument("--sizes", type=_sizes, default=(1_000_000,))
    p.add_argument("--n", type=_int, default=None)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--distinct", type=int, default=None)

    p = sub.add_parser("chart", help="SVG of normalized cost against n")
    _common(p)
    p.add_argument("--cost", choices=("cmps", "scans"), default="scans")
    p.add_argument("--series", action="append", default=None,
                   help="algo@scheme, repeatable (default: dual@tertiles:1 and classic@ninther)")
    p.add_argument("--sizes", type=_sizes, default=tuple(2 ** k for k in range(10, 21, 2)))
    p.add_argument("--trials", type=int, default=5)
    return parser


def _cmd_sort(args) -> None:
    scheme = _scheme(args)
    if args.keys:
        keys = [int(k) for k in args.keys.split(",")]
    else:
        keys = gen_keys(args.n, args.seed, args.distinct).tolist()
    if args.engine == "reference":
        out, counters = sort_keys(keys, args.algo, scheme, args.cutoff)
    else:
        arr = np.array(keys, dtype=np.int64)
        counters = fast_sort(arr, args.algo, scheme, args.cutoff)
        out = arr.tolist()
    if len(out) <= 50:
        print("sorted:", " ".join(map(str, out)))
    for name, value in counters.as_dict().items():
        print(f"{name}: {value}")


def _cmd_counts(args) -> None:
    sizes = (args.n,) if args.n is not None else args.sizes
    cfg = ExperimentConfig(
        algorithm=args.algo, scheme=_scheme(args), costs=tuple(args.cost.split(",")),
        sizes=sizes, trials=args.trials, seed=args.seed, cutoff=args.cutoff,
        distinct=args.distinct, exhaustive=args.exhaustive, workers=args.workers,
    )
    emit_csv(run_experiment(cfg).rows(), args.out, COUNTS_HEADER, args.format)


def _t_of(args) -> int:
    scheme = _scheme(args)
    if scheme.kind == "ninther":
        raise SystemExit("error: ninther has no recurrence (only its stored asymptotic constant)")
    if scheme.algorithm != args.algo:
        raise SystemExit(f"error: scheme {scheme} does not match --algo {args.algo}")
    return scheme.t


def _cmd_recurrence(args) -> None:
    t = _t_of(args)
    if args.toll == "analytic":
        mode = analysis.AnalyticToll()
    elif args.n <= 8:
        mode = analysis.oracle_toll_mode(args.algo, args.cost, t, args.n)
    else:
        mode = analysis.fitted_toll_mode(args.algo, args.cost, t, args.n, trials=args.trials, seed=args.seed)
    table = analysis.exact_recurrence(args.algo, args.cost, t, mode, args.n, exact=False if args.float else None)
    emit_csv(((n, analysis.format_value(v)) for n, v in table.rows()), args.out, RECURRENCE_HEADER, args.format)


def _cmd_asymptotic(args) -> None:
    print(f"{analysis.asymptotic_constant(args.algo, args.cost, _scheme(args)):.6f}")


def _cmd_oracle(args) -> None:
    v = analysis.exhaustive_expectation(args.algo, args.cost, _scheme(args), args.n, args.engine)
    print(f"{v} ({float(v):.6f})")


def _cmd_toll(args) -> None:
    v = analysis.empirical_toll(args.algo, args.cost, _scheme(args), args.n, trials=args.trials, seed=args.seed)
    print(f"{v} ({float(v) / args.n:.6f} per element)" if args.n else "0")


def _cmd_bench(args) -> None:
    sizes = (args.n,) if args.n is not None else args.sizes
    configs = [(args.algo, _scheme(args))] if args.algo else [(a, SamplingScheme.parse(s)) for a, s in HEADLINE]
    rows, means = [], {}
    for algo, scheme in configs:
        cfg = ExperimentConfig(algorithm=algo, scheme=scheme, sizes=sizes, trials=args.trials,
                               seed=args.seed, cutoff=args.cutoff, distinct=args.distinct, wallclock=True)
        summary = bench_wallclock(cfg, warmup=args.warmup)
        rows += summary.bench_rows()
        means[algo] = {n: w.mean_ns for n, w in summary.wall.items()}
    emit_csv(rows, args.out, BENCH_HEADER, args.format)
    if len(means) == 2:
        for n in sizes:
            ratio = means["dual"][n] / means["classic"][n]
            print(f"# n={n}: dual/classic wall-time ratio {ratio:.3f} (informational)", file=sys.stderr)


def _cmd_chart(args) -> None:
    specs = args.series or [f"{a}@{s}" for a, s in HEADLINE]
    series, asymptotes = [], []
    for entry in specs:
        algo, _, scheme_text = entry.partition("@")
        scheme = SamplingScheme.parse(scheme_text) if scheme_text else None
        cfg = ExperimentConfig(algorithm=algo, scheme=scheme, costs=(args.cost,), sizes=args.sizes,
                               trials=args.trials, seed=args.seed, cutoff=args.cutoff)
        series.append(normalized_series(run_experiment(cfg), args.cost))
        try:
            asymptotes.append((f"{algo} {cfg.scheme}", analysis.asymptotic_constant(algo, args.cost, cfg.scheme)))
        except ValueError:
            pass
    title = f"{args.cost} / (n ln n), {args.trials} trials per size"
    emit_svg_chart(series, args.out, asymptotes, title=title)


COMMANDS = {
    "sort": _cmd_sort,
    "counts": _cmd_counts,
    "recurrence": _cmd_recurrence,
    "asymptotic": _cmd_asymptotic,
    "oracle": _cmd_oracle,
    "toll": _cmd_toll,
    "bench": _cmd_bench,
    "chart": _cmd_chart,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
