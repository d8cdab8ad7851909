"""Acceptance suite: every exit criterion at its pinned tolerance, one
printed status line per criterion (run with -s to see them)."""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tpss.correlations import closed_form_W, linear_analyzer
from tpss.sampler import RunConfig, event_stream, run_coincidence, sample_thetas
from tpss.states import StateLabel, Variant
from tpss.verify import (
    check_correlation_closed_forms,
    check_density_matrices,
    check_distribution_equivalence,
    check_distribution_normalization,
    check_polarization_parameters,
    check_state_enumeration,
)

MC_SEED = 20240814
MC_EVENTS = 1_000_000


def _finish(name, ok, detail, elapsed, limit=None):
    if limit is not None:
        detail = f"{detail}; runtime {elapsed:.2f}s (limit {limit}s)"
        ok = ok and elapsed < limit
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _timed(check):
    start = time.perf_counter()
    result = check()
    return result, time.perf_counter() - start


def test_criterion_1_state_table():
    result, elapsed = _timed(check_state_enumeration)
    _finish("criterion-1 state-table", result.passed, result.detail, elapsed, limit=1.0)


def test_criterion_2_distribution_oracle():
    result, elapsed = _timed(check_distribution_equivalence)
    _finish("criterion-2 distribution-oracle", result.passed, result.detail,
            elapsed, limit=10.0)


def test_criterion_3_normalization():
    result, elapsed = _timed(check_distribution_normalization)
    _finish("criterion-3 normalization", result.passed, result.detail, elapsed)


def test_criterion_4_polarization_parameters():
    result, elapsed = _timed(check_polarization_parameters)
    _finish("criterion-4 polarization-parameters", result.passed, result.detail, elapsed)


def test_criterion_5_density_matrices():
    result, elapsed = _timed(check_density_matrices)
    _finish("criterion-5 density-matrices", result.passed, result.detail, elapsed)


def test_criterion_6_correlation_closed_forms():
    result, elapsed = _timed(check_correlation_closed_forms)
    _finish("criterion-6 correlation-closed-forms", result.passed, result.detail,
            elapsed, limit=30.0)


def test_criterion_7_monte_carlo(angular_pvalue):
    start = time.perf_counter()
    notes = []
    ok = True

    runs = [
        (StateLabel(0, 0, +1), None, math.pi / 6.0, 0.0),
        (StateLabel(2, 2, +1, Variant.B), math.pi / 3.0, 0.35, 0.1),
        (StateLabel(3, 1, +1), math.pi / 2.0, math.pi / 8.0, 0.0),
    ]
    for state, theta, psi, psi_prime in runs:
        analyzers = (linear_analyzer(psi, "forward"),
                     linear_analyzer(psi_prime, "backward"))
        config = RunConfig(state, MC_EVENTS, MC_SEED, analyzers, theta_fixed=theta)
        tally = run_coincidence(config)
        analytic = closed_form_W(state, psi, psi_prime, theta)
        se = math.sqrt(analytic * (1.0 - analytic) / MC_EVENTS)
        pull = abs(tally.estimated_w - analytic) / se
        ok = ok and pull < 4.0
        notes.append(f"{state.token} W pull {pull:.2f} sigma")
        rerun = run_coincidence(config)
        ok = ok and rerun.counts == tally.counts
        if rerun.counts != tally.counts:
            notes.append(f"{state.token} rerun differs")

    for state in (StateLabel(0, 0, +1), StateLabel(2, 0, +1, Variant.A),
                  StateLabel(3, 1, +1)):
        thetas = sample_thetas(state, event_stream(MC_SEED), MC_EVENTS)
        p = angular_pvalue(state, thetas)
        ok = ok and p > 0.001
        notes.append(f"{state.token} angular p={p:.3f}")

    again = sample_thetas(StateLabel(0, 0, +1), event_stream(MC_SEED), MC_EVENTS)
    first = sample_thetas(StateLabel(0, 0, +1), event_stream(MC_SEED), MC_EVENTS)
    ok = ok and np.array_equal(again, first)

    elapsed = time.perf_counter() - start
    _finish("criterion-7 monte-carlo", ok, "; ".join(notes), elapsed, limit=60.0)


def test_criterion_8_verify_subcommand():
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "tpss.cli", "verify"],
                          capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and "all checks passed" in proc.stdout
    _finish("criterion-8 verify-subcommand", ok,
            f"exit {proc.returncode}", elapsed)
