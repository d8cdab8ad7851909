"""Polarization analyzers and coincidence probabilities.

An ideal analyzer is a rank-1 Stokes projector acting in one photon's
helicity subspace.  Linear analyzers come in a forward and a backward flavor
(the photon traveling against the emission direction sees a mirrored
azimuth), circular analyzers are helicity projectors.  The coincidence
probability is the trace of the pair density matrix against the tensor
product of the two analyzer matrices; closed forms for the linear cases are
provided as an independent oracle.

The analyzer azimuth is measured from the x axis, taken normal to the plane
spanned by the emission direction and the quantization axis (fixed
convention, not a runtime choice).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distribution import Method, classify
from .errors import DomainError
from .polarization import PAULI, PolarizationMatrix, polarization_params
from .states import StateLabel, Variant

__all__ = [
    "AnalyzerKind",
    "Analyzer",
    "linear_analyzer",
    "circular_analyzer",
    "CoincidenceProbability",
    "coincidence",
    "closed_form_W",
    "ParityBlindnessReport",
    "circular_parity_blindness",
    "CorrelationRecord",
    "records_to_csv",
    "records_from_csv",
]

CORRELATION_CSV_HEADER = "psi_rad,psi_prime_rad,W,state,theta_rad,source"


class AnalyzerKind(enum.Enum):
    LINEAR_FORWARD = "linear_forward"
    LINEAR_BACKWARD = "linear_backward"
    CIRCULAR = "circular"


@dataclass(frozen=True)
class Analyzer:
    """Ideal polarization analyzer: a pure Stokes projector."""

    kind: AnalyzerKind
    stokes: tuple[float, float, float]
    psi: float | None = None

    def __post_init__(self):
        if abs(math.hypot(*self.stokes) - 1.0) > 1e-12:
            raise DomainError("analyzer Stokes vector must have unit length")

    def matrix(self) -> np.ndarray:
        """Efficiency matrix (I + stokes . sigma) / 2, a rank-1 projector."""
        out = PAULI[0].copy()
        for pauli, component in zip(PAULI[1:], self.stokes):
            out = out + component * pauli
        return 0.5 * out

    def orthogonal(self) -> "Analyzer":
        """The complementary analyzer (blocked channel), same kind."""
        flipped = tuple(-c for c in self.stokes)
        psi = None if self.psi is None else self.psi + math.pi / 2.0
        return Analyzer(self.kind, flipped, psi)


def linear_analyzer(psi: float, direction: str = "forward") -> Analyzer:
    """Linear analyzer at azimuth psi (radians) for the forward or backward photon."""
    if direction not in ("forward", "backward"):
        raise DomainError(f"direction must be 'forward' or 'backward', got {direction!r}")
    sign = -1.0 if direction == "forward" else 1.0
    kind = (AnalyzerKind.LINEAR_FORWARD if direction == "forward"
            else AnalyzerKind.LINEAR_BACKWARD)
    return Analyzer(kind, (-math.cos(2 * psi), sign * math.sin(2 * psi), 0.0), float(psi))


def circular_analyzer(handedness: int = +1) -> Analyzer:
    """Circular analyzer projecting on helicity +1 or -1."""
    if handedness not in (+1, -1):
        raise DomainError("handedness must be +1 or -1")
    return Analyzer(AnalyzerKind.CIRCULAR, (0.0, 0.0, float(handedness)), None)


@dataclass(frozen=True)
class CoincidenceProbability:
    """Probability that both analyzers pass their photon simultaneously."""

    value: float
    state: StateLabel | None = None
    theta: float | None = None
    psi: float | None = None
    psi_prime: float | None = None


def _check_pairing(a: Analyzer, b: Analyzer):
    linear_pair = (a.kind is AnalyzerKind.LINEAR_FORWARD
                   and b.kind is AnalyzerKind.LINEAR_BACKWARD)
    circular_pair = (a.kind is AnalyzerKind.CIRCULAR and b.kind is AnalyzerKind.CIRCULAR)
    if not (linear_pair or circular_pair):
        raise DomainError(
            "analyzer pair must be (linear forward, linear backward) or both circular; "
            f"got ({a.kind.value}, {b.kind.value})")


def coincidence(rho: PolarizationMatrix, a: Analyzer, b: Analyzer) -> CoincidenceProbability:
    """Trace of the pair state against the two-analyzer projector."""
    _check_pairing(a, b)
    rho.validate()
    raw = np.trace(rho.matrix @ np.kron(a.matrix(), b.matrix()))
    if abs(raw.imag) > 1e-12:
        raise DomainError("coincidence probability came out non-real")
    value = min(1.0, max(0.0, float(raw.real)))
    return CoincidenceProbability(value, rho.state, rho.theta, a.psi, b.psi)


def closed_form_W(state: StateLabel, psi: float, psi_prime: float,
                  theta=None, method: Method = Method.DIRECT) -> float:
    """Analytic coincidence probability for linear analyzers.

    Equal-helicity states give power laws in the analyzer angle difference;
    opposite-helicity states depend on the angle sum with weight zeta.
    """
    if classify(state) == 0:
        delta = psi - psi_prime
        if state.parity > 0:
            return 0.5 * math.cos(delta) ** 2
        return 0.5 * math.sin(delta) ** 2
    if theta is None:
        raise DomainError(f"state {state.token} needs theta for its correlation law")
    zeta = polarization_params(state.j, state.m, theta, method).zeta
    sign = 1.0 if state.j % 2 == 0 else -1.0
    return 0.25 * (1.0 + sign * zeta * math.cos(2.0 * (psi + psi_prime)))


@dataclass(frozen=True)
class ParityBlindnessReport:
    """Coincidence rates of circular analyzers on the two parity states.

    ``rows`` holds (handedness1, handedness2, W_plus, W_minus); circular
    measurements cannot separate the parities, so ``max_difference`` should
    vanish and each completeness sum should be 1.
    """

    j: int
    m: int
    rows: tuple
    max_difference: float
    completeness: tuple[float, float]


def circular_parity_blindness(j: int, m: int, theta=None) -> ParityBlindnessReport:
    """Compare both parity states of (j, m) under all circular analyzer pairings."""
    if j != 0 and (j % 2 != 0 or j < 2):
        raise DomainError(f"parity comparison needs j = 0 or even j >= 2, got j={j}")
    from .polarization import rho_parity  # local import keeps module load light

    variant = Variant.ONLY if j == 0 else Variant.A
    plus = rho_parity(+1, StateLabel(j, m, +1, variant))
    minus = rho_parity(-1, StateLabel(j, m, -1))
    rows = []
    max_diff = 0.0
    totals = [0.0, 0.0]
    for h1 in (+1, -1):
        for h2 in (+1, -1):
            a, b = circular_analyzer(h1), circular_analyzer(h2)
            w_plus = coincidence(plus, a, b).value
            w_minus = coincidence(minus, a, b).value
            rows.append((h1, h2, w_plus, w_minus))
            max_diff = max(max_diff, abs(w_plus - w_minus))
            totals[0] += w_plus
            totals[1] += w_minus
    return ParityBlindnessReport(j, m, tuple(rows), max_diff, (totals[0], totals[1]))


@dataclass(frozen=True)
class CorrelationRecord:
    """One emitted correlation value with its provenance."""

    psi: float | None
    psi_prime: float | None
    value: float
    state_token: str
    theta: float | None
    source: str  # trace | closed_form | monte_carlo


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def records_to_csv(records) -> str:
    lines = [CORRELATION_CSV_HEADER]
    for r in records:
        lines.append(",".join([_fmt(r.psi), _fmt(r.psi_prime), _fmt(r.value),
                               r.state_token, _fmt(r.theta), r.source]))
    return "\n".join(lines) + "\n"


def records_from_csv(text: str) -> list[CorrelationRecord]:
    lines = text.strip().split("\n")
    if not lines or lines[0] != CORRELATION_CSV_HEADER:
        raise DomainError("unrecognized correlation CSV header")
    out = []
    for line in lines[1:]:
        psi, psi_prime, value, token, theta, source = line.split(",")
        out.append(CorrelationRecord(
            float(psi) if psi else None,
            float(psi_prime) if psi_prime else None,
            float(value), token,
            float(theta) if theta else None,
            source))
    return out
