import time

import pytest
from hypothesis import settings

from quicklab.harness import ExperimentConfig, run_experiment
from quicklab.sortcore import SamplingScheme

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

HEADLINE_N = 10**6
HEADLINE_TRIALS = 50
HEADLINE_SEED = 20140101

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def headline_runs():
    """Dual tertiles:1 and classic ninther on the same 50 seeded inputs of size 10^6."""
    out = {}
    start = time.perf_counter()
    for algo, scheme in (("dual", "tertiles:1"), ("classic", "ninther")):
        cfg = ExperimentConfig(
            algorithm=algo, scheme=SamplingScheme.parse(scheme), costs=("cmps", "scans"),
            sizes=(HEADLINE_N,), trials=HEADLINE_TRIALS, seed=HEADLINE_SEED, workers=4,
        )
        out[algo] = run_experiment(cfg)
    out["elapsed"] = time.perf_counter() - start
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
