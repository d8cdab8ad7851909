"""Monte Carlo machinery: rejection sampling, outcome draws, determinism."""
import math

import numpy as np
import pytest

from tpss.correlations import circular_analyzer, closed_form_W, linear_analyzer
from tpss.errors import DomainError, NoIntensityError
from tpss.sampler import (
    CoincidenceTally,
    EnvelopeViolation,
    RunConfig,
    _rejection_sample,
    event_stream,
    run_coincidence,
    sample_direction,
    sample_thetas,
    tally_from_json,
    tally_to_json,
)
from tpss.states import StateLabel, Variant

LINEAR_PAIR = (linear_analyzer(0.0, "forward"), linear_analyzer(0.0, "backward"))


def test_isotropic_state_theta_distribution(angular_pvalue):
    state = StateLabel(0, 0, +1)
    thetas = sample_thetas(state, event_stream(11), 200_000)
    assert angular_pvalue(state, thetas) > 0.001
    # the polar cosine of an isotropic source is uniform
    assert abs(np.mean(np.cos(thetas))) < 4.0 / math.sqrt(3.0 * 200_000) * 2


def test_aligned_quadrupole_theta_distribution(angular_pvalue):
    state = StateLabel(2, 0, +1, Variant.A)
    thetas = sample_thetas(state, event_stream(12), 200_000)
    assert angular_pvalue(state, thetas) > 0.001


def test_sample_direction_deterministic():
    state = StateLabel(3, 1, +1)
    first = [sample_direction(state, event_stream(99)) for _ in range(1)]
    a = event_stream(7)
    b = event_stream(7)
    run1 = [sample_direction(state, a) for _ in range(10)]
    run2 = [sample_direction(state, b) for _ in range(10)]
    assert run1 == run2
    assert all(0.0 <= d.theta <= math.pi and 0.0 <= d.phi < 2 * math.pi for d in run1)
    assert first[0] != run1[0]  # different seed, different stream


def test_rejection_envelope_violation_is_fatal():
    rng = event_stream(0)
    with pytest.raises(EnvelopeViolation):
        _rejection_sample(lambda t: np.full_like(t, 2.0), 1.0, rng, 100)


def test_run_config_validation():
    with pytest.raises(DomainError):
        RunConfig(StateLabel(0, 0, +1), 0, 1, LINEAR_PAIR)
    with pytest.raises(DomainError):
        RunConfig(StateLabel(0, 0, +1), 10, -1, LINEAR_PAIR)
    with pytest.raises(DomainError):
        RunConfig(StateLabel(0, 0, +1), 10, 2**64, LINEAR_PAIR)
    with pytest.raises(DomainError):
        RunConfig(StateLabel(0, 0, +1), 10, 1,
                  (LINEAR_PAIR[0], LINEAR_PAIR[0]))


def test_tally_invariants():
    with pytest.raises(DomainError):
        CoincidenceTally(((1, 2), (3, 4)), 11, 0.1, 0.01)


def test_parallel_analyzers_on_parity_states():
    # positive parity with parallel linear analyzers: half the pairs pass
    # both, none pass exactly one
    config = RunConfig(StateLabel(0, 0, +1), 100_000, 41, LINEAR_PAIR)
    tally = run_coincidence(config)
    expected = 0.5
    se = math.sqrt(expected * (1 - expected) / config.n_events)
    assert abs(tally.estimated_w - expected) < 4 * se
    assert tally.counts[0][1] == 0 and tally.counts[1][0] == 0
    # negative parity: both-pass never happens
    config = RunConfig(StateLabel(0, 0, -1), 100_000, 42, LINEAR_PAIR)
    tally = run_coincidence(config)
    assert tally.counts[0][0] == 0
    assert tally.estimated_w == 0.0


def test_sum_angle_state_at_fixed_direction():
    state = StateLabel(2, 2, +1, Variant.B)
    theta = math.pi / 3.0
    psi, psi_prime = 0.35, 0.1
    analyzers = (linear_analyzer(psi, "forward"), linear_analyzer(psi_prime, "backward"))
    config = RunConfig(state, 200_000, 4242, analyzers, theta_fixed=theta)
    tally = run_coincidence(config)
    expected = closed_form_W(state, psi, psi_prime, theta)
    se = math.sqrt(expected * (1 - expected) / config.n_events)
    assert abs(tally.estimated_w - expected) < 4 * se


def test_sampled_direction_run_matches_average_law():
    # without a fixed direction the estimate converges to the
    # intensity-weighted average of the coincidence law; for opposite
    # circular analyzers on an opposite-helicity state that average is 1/2
    # because the circular-polarization degree integrates to zero
    state = StateLabel(3, 1, +1)
    config = RunConfig(state, 100_000, 5151,
                       (circular_analyzer(+1), circular_analyzer(-1)))
    tally = run_coincidence(config)
    se = math.sqrt(0.5 * 0.5 / config.n_events)
    assert abs(tally.estimated_w - 0.5) < 4 * se
    # equal circular analyzers can never fire together on this state
    config = RunConfig(state, 10_000, 5151,
                       (circular_analyzer(+1), circular_analyzer(+1)))
    assert run_coincidence(config).estimated_w == 0.0


def test_determinism_and_worker_independence():
    state = StateLabel(2, 1, +1, Variant.B)
    config = RunConfig(state, 50_000, 777, LINEAR_PAIR, theta_fixed=1.0)
    one = run_coincidence(config)
    two = run_coincidence(config)
    threaded = run_coincidence(config, workers=4)
    assert one.counts == two.counts == threaded.counts


def test_no_intensity_propagates():
    state = StateLabel(3, 1, +1)
    config = RunConfig(state, 1000, 5, LINEAR_PAIR, theta_fixed=0.0)
    with pytest.raises(NoIntensityError):
        run_coincidence(config)


def test_tally_json_round_trip():
    config = RunConfig(StateLabel(2, 2, +1, Variant.B), 10_000, 99, LINEAR_PAIR,
                       theta_fixed=math.pi / 2.0)
    tally = run_coincidence(config)
    text = tally_to_json(config, tally)
    config2, tally2 = tally_from_json(text)
    assert tally_to_json(config2, tally2) == text
    assert config2 == config
    assert tally2 == tally
    assert sum(sum(row) for row in tally2.counts) == 10_000
