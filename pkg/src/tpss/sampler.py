"""Monte Carlo validation of the closed-form results.

Emission directions are drawn from the angular density by rejection sampling
under a constant envelope; analyzer click outcomes are drawn from the
four-outcome distribution spanned by a pair of analyzers and their blocked
channels.  Events are partitioned over a fixed number of logical streams of
a counter-based generator (Philox keyed by seed and stream index), so a tally
depends only on the configuration and seed, never on how many OS threads
processed it.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlations import Analyzer, AnalyzerKind, _check_pairing
from .distribution import classify, w_direct
from .errors import DomainError, NoIntensityError
from .polarization import PAULI, W2_THRESHOLD, rho_parity
from .angular import wigner_small_d
from .states import Direction, StateLabel

__all__ = [
    "N_STREAMS",
    "EnvelopeViolation",
    "RunConfig",
    "CoincidenceTally",
    "event_stream",
    "sample_direction",
    "sample_thetas",
    "run_coincidence",
    "tally_to_json",
    "tally_from_json",
]

# Logical stream count; fixed so tallies are independent of worker count.
N_STREAMS = 64

_ENVELOPE_SCAN_POINTS = 1024
_ENVELOPE_SAFETY = 1.05


class EnvelopeViolation(RuntimeError):
    """The target density exceeded its rejection envelope: a numerics bug."""


def event_stream(seed: int, index: int = 0) -> np.random.Generator:
    """Deterministic counter-based stream for (seed, stream index)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class RunConfig:
    """One reproducible coincidence run."""

    state: StateLabel
    n_events: int
    seed: int
    analyzers: tuple[Analyzer, Analyzer]
    theta_fixed: float | None = None

    def __post_init__(self):
        if not isinstance(self.n_events, int) or self.n_events <= 0:
            raise DomainError(f"n_events must be a positive integer, got {self.n_events!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        _check_pairing(*self.analyzers)


@dataclass(frozen=True)
class CoincidenceTally:
    """Click counts over (pass/block) x (pass/block) plus the rate estimate."""

    counts: tuple[tuple[int, int], tuple[int, int]]
    n_events: int
    estimated_w: float
    standard_error: float

    def __post_init__(self):
        total = sum(sum(row) for row in self.counts)
        if total != self.n_events:
            raise DomainError("tally counts do not sum to n_events")
        if not 0.0 <= self.estimated_w <= 1.0:
            raise DomainError("estimated coincidence rate outside [0, 1]")


def _density(state: StateLabel):
    """Marginal density of the polar angle: 2*pi * w(theta) * sin(theta)."""
    lam = classify(state)
    j, m = state.j, state.m

    def f(theta):
        return 2.0 * math.pi * w_direct(j, m, lam, theta) * np.sin(theta)

    return f


@lru_cache(maxsize=None)
def _envelope_bound(j: int, m: int, parity: int, variant) -> float:
    state = StateLabel(j, m, parity, variant)
    f = _density(state)
    grid = np.linspace(0.0, math.pi, _ENVELOPE_SCAN_POINTS)
    return _ENVELOPE_SAFETY * float(f(grid).max())


def _envelope(state: StateLabel) -> float:
    return _envelope_bound(state.j, state.m, state.parity, state.variant)


def sample_direction(state: StateLabel, rng: np.random.Generator) -> Direction:
    """Draw one emission direction from the state's angular density."""
    f = _density(state)
    bound = _envelope(state)
    while True:
        theta = rng.uniform(0.0, math.pi)
        height = rng.uniform(0.0, bound)
        value = float(f(theta))
        if value > bound:
            raise EnvelopeViolation(
                f"density {value:.6g} exceeds envelope {bound:.6g} at theta={theta:.6f}")
        if height <= value:
            return Direction(theta, rng.uniform(0.0, 2.0 * math.pi))


def _rejection_sample(density, bound: float, rng: np.random.Generator, n: int) -> np.ndarray:
    out = np.empty(n)
    have = 0
    while have < n:
        chunk = max(4096, 2 * (n - have))
        theta = rng.uniform(0.0, math.pi, chunk)
        height = rng.uniform(0.0, bound, chunk)
        value = density(theta)
        if np.any(value > bound):
            worst = float(value.max())
            raise EnvelopeViolation(
                f"density {worst:.6g} exceeds envelope {bound:.6g}")
        accepted = theta[height <= value]
        take = min(n - have, accepted.size)
        out[have:have + take] = accepted[:take]
        have += take
    return out


def sample_thetas(state: StateLabel, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n polar angles from the state's angular density (vectorized)."""
    if n < 0:
        raise DomainError("sample count must be non-negative")
    return _rejection_sample(_density(state), _envelope(state), rng, n)


def _kron(i, j):
    return np.kron(PAULI[i], PAULI[j])


def _outcome_projectors(a: Analyzer, b: Analyzer):
    """Projectors of the four outcomes (pass/pass, pass/block, block/pass, block/block)."""
    a_perp, b_perp = a.orthogonal(), b.orthogonal()
    return [np.kron(x.matrix(), y.matrix())
            for x, y in ((a, b), (a, b_perp), (a_perp, b), (a_perp, b_perp))]


def _block_sizes(n_events: int) -> list[int]:
    base, rem = divmod(n_events, N_STREAMS)
    return [base + (1 if b < rem else 0) for b in range(N_STREAMS)]


def _xi_zeta_arrays(state: StateLabel, thetas: np.ndarray):
    up = wigner_small_d(state.j, 2, state.m, thetas)
    dn = wigner_small_d(state.j, -2, state.m, thetas)
    norm = up * up + dn * dn
    w2 = (2 * state.j + 1) / (8.0 * math.pi) * norm
    if np.any(w2 <= W2_THRESHOLD):
        raise NoIntensityError("pair intensity below threshold at a sampled direction")
    return (up * up - dn * dn) / norm, 2.0 * up * dn / norm


def run_coincidence(config: RunConfig, workers: int = 1) -> CoincidenceTally:
    """Estimate the coincidence probability of config.analyzers by sampling.

    Per event the four-outcome distribution (both pass, one passes, both
    blocked) is sampled; the estimate converges to the trace formula value.
    """
    state = config.state
    lam = classify(state)
    projectors = _outcome_projectors(*config.analyzers)

    if lam == 0:
        rho = rho_parity(state.parity, state).matrix
        probs_const = np.array([np.trace(rho @ e).real for e in projectors])
        coeffs = None
    else:
        sign = 1.0 if state.j % 2 == 0 else -1.0
        base = 0.25 * (_kron(0, 0) - _kron(3, 3))
        lin_xi = 0.25 * (_kron(3, 0) - _kron(0, 3))
        lin_zeta = sign * 0.25 * (_kron(1, 1) + _kron(2, 2))
        coeffs = np.array([[np.trace(t @ e).real for e in projectors]
                           for t in (base, lin_xi, lin_zeta)])
        if config.theta_fixed is not None:
            xi, zeta = _xi_zeta_arrays(state, np.asarray(float(config.theta_fixed)))
            probs_const = coeffs[0] + float(xi) * coeffs[1] + float(zeta) * coeffs[2]
        else:
            probs_const = None

    density = _density(state)
    bound = _envelope(state)

    def run_block(block_index: int, block_events: int) -> np.ndarray:
        if block_events == 0:
            return np.zeros(4, dtype=np.int64)
        rng = event_stream(config.seed, block_index)
        if probs_const is not None:
            probs = np.broadcast_to(probs_const, (block_events, 4))
        else:
            thetas = _rejection_sample(density, bound, rng, block_events)
            xi, zeta = _xi_zeta_arrays(state, thetas)
            probs = coeffs[0] + xi[:, None] * coeffs[1] + zeta[:, None] * coeffs[2]
        if probs.min() < -1e-12 or np.abs(probs.sum(axis=1) - 1.0).max() > 1e-12:
            raise RuntimeError("outcome probabilities failed their sanity bounds")
        probs = np.clip(probs, 0.0, None)
        draws = rng.random(block_events)
        outcome = (draws[:, None] > np.cumsum(probs, axis=1)).sum(axis=1)
        np.minimum(outcome, 3, out=outcome)
        return np.bincount(outcome, minlength=4).astype(np.int64)

    sizes = _block_sizes(config.n_events)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_block, range(N_STREAMS), sizes))
    else:
        partials = [run_block(b, nb) for b, nb in enumerate(sizes)]
    counts4 = np.sum(partials, axis=0)

    estimate = counts4[0] / config.n_events
    stderr = math.sqrt(estimate * (1.0 - estimate) / config.n_events)
    counts = ((int(counts4[0]), int(counts4[1])), (int(counts4[2]), int(counts4[3])))
    return CoincidenceTally(counts, config.n_events, float(estimate), stderr)


def _analyzer_doc(a: Analyzer) -> dict:
    return {"kind": a.kind.value, "psi_rad": a.psi, "stokes": list(a.stokes)}


def tally_to_json(config: RunConfig, tally: CoincidenceTally) -> str:
    doc = {
        "config": {
            "state": config.state.token,
            "n_events": config.n_events,
            "seed": config.seed,
            "theta_rad": config.theta_fixed,
            "analyzers": [_analyzer_doc(a) for a in config.analyzers],
        },
        "counts": [list(row) for row in tally.counts],
        "n_events": tally.n_events,
        "estimated_W": tally.estimated_w,
        "standard_error": tally.standard_error,
    }
    return json.dumps(doc, indent=2) + "\n"


def tally_from_json(text: str) -> tuple[RunConfig, CoincidenceTally]:
    doc = json.loads(text)
    cfg = doc["config"]
    analyzers = tuple(
        Analyzer(AnalyzerKind(a["kind"]), tuple(a["stokes"]), a["psi_rad"])
        for a in cfg["analyzers"])
    config = RunConfig(StateLabel.parse(cfg["state"]), cfg["n_events"], cfg["seed"],
                       analyzers, cfg["theta_rad"])
    counts = tuple(tuple(int(v) for v in row) for row in doc["counts"])
    tally = CoincidenceTally(counts, doc["n_events"], doc["estimated_W"],
                             doc["standard_error"])
    return config, tally
