import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from quicklab import analysis as an
from quicklab.costmodel import InstrumentedArray
from quicklab.sortcore import SamplingScheme, partition_step


def test_harmonic():
    assert an.harmonic(0) == 0
    assert an.harmonic(1) == 1
    assert an.harmonic(4) == Fraction(25, 12)
    assert an.harmonic(6) - an.harmonic(2) == Fraction(19, 20)
    assert an.harmonic(100, exact=False) == pytest.approx(float(an.harmonic(100)), rel=1e-15)


@pytest.mark.parametrize(
    "algo,cost,scheme,expected,tol",
    [
        ("classic", "cmps", SamplingScheme.median(0), 2.0, 1e-12),
        ("dual", "cmps", SamplingScheme.tertiles(1), 1.7043, 1e-4),
        ("dual", "scans", SamplingScheme.tertiles(1), 1.4035, 1e-4),
        ("dual", "cmps", SamplingScheme.tertiles(0), 1.9, 1e-12),
        ("classic", "scans", SamplingScheme.ninther(), 1.5697, 0),
        ("classic", "scans", SamplingScheme.median(1), 12 / 7, 1e-12),
    ],
)
def test_asymptotic_constants(algo, cost, scheme, expected, tol):
    assert an.asymptotic_constant(algo, cost, scheme) == pytest.approx(expected, abs=tol)


def test_asymptotic_rejects_bad_pairing():
    with pytest.raises(ValueError):
        an.asymptotic_constant("dual", "cmps", SamplingScheme.ninther())
    with pytest.raises(ValueError):
        an.asymptotic_constant("classic", "swaps", SamplingScheme.median(0))


def test_segment_distribution_examples():
    assert an.segment_distribution("classic", 3, 0).probs == (Fraction(1, 3),) * 3
    d = an.segment_distribution("classic", 5, 1)
    assert d.probs == tuple(Fraction(j * (4 - j), 10) for j in range(5))
    assert (d[1], d[2]) == (Fraction(3, 10), Fraction(2, 5))


def test_median_of_three_split_by_enumeration():
    # choose 3 of the 5 ranks; the median rank m leaves m-1 elements on the left
    tally = Counter(sorted(s)[1] - 1 for s in itertools.combinations(range(1, 6), 3))
    law = an.segment_distribution("classic", 5, 1)
    assert all(Fraction(tally[j], 10) == law[j] for j in range(5))


@pytest.mark.parametrize("algo,scheme", [("classic", SamplingScheme.median(1)), ("dual", SamplingScheme.tertiles(1)),
                                         ("dual", SamplingScheme.tertiles(0))])
def test_implementation_split_matches_law(algo, scheme):
    n = 7
    tally = Counter()
    for perm in itertools.permutations(range(n)):
        arr = InstrumentedArray(perm)
        segs = partition_step(arr, 0, n - 1, algo, scheme)
        tally[segs[0][1] - segs[0][0] + 1] += 1
    law = an.segment_distribution(algo, n, scheme.t)
    assert all(Fraction(tally[j], math.factorial(n)) == law[j] for j in range(len(law)))


@pytest.mark.parametrize("algo", ["classic", "dual"])
@pytest.mark.parametrize("t", range(4))
def test_distributions_sum_to_one(algo, t):
    for n in range(an.sample_size(algo, t), 201):
        d = an.segment_distribution(algo, n, t)
        assert d.total() == 1
        assert len(d) == (n if algo == "classic" else n - 1)
        assert abs(an.segment_distribution(algo, n, t, exact=False).total() - 1) < 1e-12


@pytest.mark.parametrize("t", range(4))
def test_classic_symmetry(t):
    for n in range(2 * t + 1, 80):
        p = an.segment_distribution("classic", n, t).probs
        assert p == p[::-1]


@pytest.mark.parametrize("t", range(3))
def test_dual_marginal_matches_joint(t):
    for n in range(3 * t + 2, 31):
        joint = {}
        for j1 in range(n - 1):
            for j2 in range(n - 1 - j1):
                j3 = n - 2 - j1 - j2
                joint[j1, j2, j3] = an.joint_segment_probability(n, t, j1, j2, j3)
        assert sum(joint.values()) == 1
        law = an.segment_distribution("dual", n, t)
        for seg in range(3):
            marginal = Counter()
            for key, p in joint.items():
                marginal[key[seg]] += p
            assert all(marginal[j] == law[j] for j in range(n - 1))


def test_segment_distribution_below_sample():
    with pytest.raises(ValueError):
        an.segment_distribution("dual", 4, 1)


def test_classic_recurrence_small_values():
    table = an.exact_recurrence("classic", "cmps", 0, an.AnalyticToll(), 10)
    assert table.exact
    assert table[0] == table[1] == 0
    assert (table[2], table[3], table[4]) == (1, Fraction(8, 3), Fraction(29, 6))


@pytest.mark.parametrize("algo,t", [("classic", 0), ("classic", 1), ("dual", 0), ("dual", 1), ("dual", 2)])
@pytest.mark.parametrize("cost", an.COST_KINDS)
def test_recurrence_monotone_and_bounded(algo, t, cost):
    table = an.exact_recurrence(algo, cost, t, an.AnalyticToll(), 4000)
    v = np.asarray(table.values)
    assert v[0] == v[1] == 0
    assert np.all(np.diff(v) >= 0)
    ratios = v[2:] / (np.arange(2, 4001) * np.log(np.arange(2, 4001)))
    assert np.all(np.isfinite(ratios)) and ratios.max() < 5


def test_float_and_rational_agree():
    for algo, cost, t in [("classic", "scans", 1), ("dual", "cmps", 1), ("dual", "scans", 0)]:
        q = an.exact_recurrence(algo, cost, t, an.AnalyticToll(), 64)
        f = an.exact_recurrence(algo, cost, t, an.AnalyticToll(), 64, exact=False)
        assert not f.exact
        for n in range(65):
            assert f[n] == pytest.approx(float(q[n]), rel=1e-12)


def test_dual_oracle_base_at_two():
    mode = an.oracle_toll_mode("dual", "cmps", 0, 6)
    table = an.exact_recurrence("dual", "cmps", 0, mode, 6)
    assert table[2] == an.exhaustive_expectation("dual", "cmps", SamplingScheme.tertiles(0), 2)


def test_empirical_mode_needs_full_domain():
    with pytest.raises(ValueError):
        an.exact_recurrence("dual", "cmps", 0, an.EmpiricalToll({2: 1, 3: 2}), 5)


@pytest.mark.parametrize("algo,t", [("classic", 0), ("classic", 1), ("classic", 2),
                                    ("dual", 0), ("dual", 1), ("dual", 2)])
@pytest.mark.parametrize("cost", an.COST_KINDS)
def test_leading_constant_converges(algo, t, cost):
    table = an.exact_recurrence(algo, cost, t, an.AnalyticToll(), 2 ** 15)
    target = an.asymptotic_constant(algo, cost, an.scheme_for(algo, t))
    assert an.leading_constant_estimate(table, 2 ** 14) == pytest.approx(target, rel=0.01)


def test_leading_constant_horizon_check():
    table = an.exact_recurrence("classic", "cmps", 0, an.AnalyticToll(), 100)
    with pytest.raises(ValueError):
        an.leading_constant_estimate(table, 51)


def test_exhaustive_trivial_sizes():
    for n in (0, 1):
        for algo, scheme in [("classic", SamplingScheme.median(1)), ("dual", SamplingScheme.tertiles(1))]:
            for cost in ("cmps", "scans", "swaps"):
                assert an.exhaustive_expectation(algo, cost, scheme, n) == 0


def test_exhaustive_golden_values():
    # [1,2] costs 3 comparisons, [2,1] costs 2
    assert an.exhaustive_expectation("classic", "cmps", SamplingScheme.median(0), 2) == Fraction(5, 2)
    assert an.exhaustive_expectation("dual", "cmps", SamplingScheme.tertiles(0), 5) == 10


def test_exhaustive_limit():
    with pytest.raises(ValueError):
        an.exhaustive_expectation("classic", "cmps", SamplingScheme.median(0), 10)


def test_engines_agree_small():
    for n in range(6):
        for algo, scheme in [("classic", SamplingScheme.ninther()), ("dual", SamplingScheme.tertiles(1))]:
            assert an.exhaustive_counts(algo, scheme, n, engine="fast") == an.exhaustive_counts(
                algo, scheme, n, engine="reference")


def test_classic_toll_exhaustive_n3():
    v = an.empirical_toll("classic", "cmps", SamplingScheme.median(0), 3)
    assert 2 <= v <= 4
    assert v == Fraction(11, 3)


def test_classic_comparison_toll_closed_form():
    # crossing-pointer partition: n + 1 - 1/n comparisons on average
    for n in range(2, 9):
        assert an.empirical_toll("classic", "cmps", SamplingScheme.median(0), n) == n + 1 - Fraction(1, n)


def test_dual_comparison_toll_closed_form():
    # 19/12 (n+1) - 2 for the verbatim partitioning loop plus its pivot comparison
    for n in range(3, 9):
        got = an.empirical_toll("dual", "cmps", SamplingScheme.tertiles(0), n)
        assert got == Fraction(19, 12) * (n + 1) - 2


def test_dual_scan_toll_monte_carlo():
    v = an.empirical_toll("dual", "scans", SamplingScheme.tertiles(0), 10**5, trials=200, seed=1)
    assert 1.30 <= v / 10**5 <= 1.37


def test_classic_scan_toll_monte_carlo():
    v = an.empirical_toll("classic", "scans", SamplingScheme.median(0), 10**4, trials=200, seed=1)
    assert 0.98 <= v / 10**4 <= 1.1


@pytest.mark.parametrize("algo", ["classic", "dual"])
@pytest.mark.parametrize("t", [0, 1])
@pytest.mark.parametrize("cost", an.COST_KINDS)
def test_oracle_equivalence_up_to_7(algo, t, cost):
    scheme = an.scheme_for(algo, t)
    table = an.exact_recurrence(algo, cost, t, an.oracle_toll_mode(algo, cost, t, 7), 7)
    assert table.exact
    for n in range(8):
        assert table[n] == an.exhaustive_expectation(algo, cost, scheme, n)


def test_sorting_the_sample_breaks_equivalence_for_t2():
    # with five or more sampled elements the sample sort leaves the segments
    # no longer uniformly random, so the recurrence drifts from the truth
    algo, cost, t = "classic", "cmps", 2
    table = an.exact_recurrence(algo, cost, t, an.oracle_toll_mode(algo, cost, t, 8), 8)
    scheme = an.scheme_for(algo, t)
    assert table[8] != an.exhaustive_expectation(algo, cost, scheme, 8)


def test_recurrence_csv(tmp_path):
    table = an.exact_recurrence("classic", "cmps", 0, an.AnalyticToll(), 4)
    out = tmp_path / "r.csv"
    table.to_csv(out)
    assert out.read_text() == "n,value\n0,0\n1,0\n2,1\n3,8/3\n4,29/6\n"
    with pytest.raises(OSError):
        table.to_csv(tmp_path / "missing" / "r.csv")
