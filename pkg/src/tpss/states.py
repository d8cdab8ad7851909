"""Two-photon spherical states: labels, selection rules, helicity content,
and momentum-space amplitudes.

A state is identified by total angular momentum ``j``, projection ``m``,
parity ``+1``/``-1``, and (for even ``j >= 2`` with positive parity, where two
independent states exist) a variant letter ``a`` or ``b``.  The selection
rules for a photon pair in its center-of-mass frame are:

* no state exists with j = 1;
* j = 0 admits one state of each parity;
* even j >= 2 admits two positive-parity states (variants a and b) and one
  negative-parity state;
* odd j >= 3 admits a single positive-parity state.

Each state is an equal-weight two-term superposition of pair helicity
configurations; variant ``a`` and the negative-parity states carry equal
helicities (total helicity 0), variant ``b`` and the odd-j states carry
opposite helicities (total helicity +-2).
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .angular import wigner_small_d
from .errors import DomainError

__all__ = [
    "Variant",
    "StateLabel",
    "HelicityComponent",
    "Direction",
    "BASIS",
    "BASIS_LABEL",
    "enumerate_states",
    "state_counts",
    "iter_states",
    "helicity_decomposition",
    "amplitude",
    "amplitude_vector",
]

# Two-photon helicity basis order used for every 4x4 matrix in the package.
BASIS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
BASIS_LABEL = "++,+-,-+,--"

_SQRT_HALF = math.sqrt(0.5)

_TOKEN_RE = re.compile(r"^J(\d+)M(-?\d+)P([+-])([ab]?)$")


class Variant(enum.Enum):
    """Distinguishes the two even-j positive-parity states; ONLY elsewhere."""

    A = "a"
    B = "b"
    ONLY = ""


@dataclass(frozen=True)
class StateLabel:
    """Quantum numbers of one allowed two-photon spherical state."""

    j: int
    m: int
    parity: int
    variant: Variant = Variant.ONLY

    def __post_init__(self):
        if not isinstance(self.j, int) or self.j < 0:
            raise DomainError(f"j must be a non-negative integer, got {self.j!r}")
        if self.j == 1:
            raise DomainError("no two-photon state exists with j=1")
        if not isinstance(self.m, int) or abs(self.m) > self.j:
            raise DomainError(f"projection m={self.m!r} must satisfy |m| <= j={self.j}")
        if self.parity not in (+1, -1):
            raise DomainError(f"parity must be +1 or -1, got {self.parity!r}")
        if self.j == 0 or self.j % 2 == 1:
            if self.j % 2 == 1 and self.parity == -1:
                raise DomainError(f"odd j={self.j} admits only positive parity")
            if self.variant is not Variant.ONLY:
                raise DomainError(
                    f"state j={self.j}, parity={self.parity:+d} is unique; "
                    "no variant selector applies")
        else:
            if self.parity == +1 and self.variant is Variant.ONLY:
                raise DomainError(
                    f"even j={self.j} with positive parity has two states; "
                    "select variant 'a' or 'b'")
            if self.parity == -1 and self.variant is not Variant.ONLY:
                raise DomainError(
                    f"the negative-parity state with j={self.j} is unique; "
                    "no variant selector applies")

    @property
    def token(self) -> str:
        """Canonical text form, e.g. ``J2M1P+a`` or ``J0M0P+``."""
        sign = "+" if self.parity > 0 else "-"
        return f"J{self.j}M{self.m}P{sign}{self.variant.value}"

    @classmethod
    def parse(cls, token: str) -> "StateLabel":
        match = _TOKEN_RE.match(token.strip())
        if not match:
            raise DomainError(
                f"unrecognized state token {token!r}; expected J<j>M<m>P<+|->[a|b]")
        j, m = int(match.group(1)), int(match.group(2))
        parity = +1 if match.group(3) == "+" else -1
        variant = Variant(match.group(4))
        return cls(j, m, parity, variant)

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class HelicityComponent:
    """One pair-helicity term of a state, with its superposition coefficient."""

    lambda1: int
    lambda2: int
    coefficient: float

    @property
    def total_helicity(self) -> int:
        return self.lambda1 - self.lambda2


@dataclass(frozen=True)
class Direction:
    """Emission direction of the pair in the center-of-mass frame."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise DomainError("direction angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise DomainError(f"phi={self.phi!r} outside [0, 2*pi)")


def state_counts(j: int) -> tuple[int, int]:
    """Number of states (positive parity, negative parity) for fixed j and m."""
    if not isinstance(j, int) or j < 0:
        raise DomainError(f"j must be a non-negative integer, got {j!r}")
    if j == 0:
        return 1, 1
    if j == 1:
        return 0, 0
    if j % 2 == 0:
        return 2, 1
    return 1, 0


def enumerate_states(j: int, m: int = 0) -> list[StateLabel]:
    """All states with the given j at fixed projection m (empty for j=1)."""
    n_plus, n_minus = state_counts(j)
    if n_plus == 0 and n_minus == 0:
        return []
    if j == 0:
        return [StateLabel(0, m, +1), StateLabel(0, m, -1)]
    if j % 2 == 0:
        return [StateLabel(j, m, +1, Variant.A),
                StateLabel(j, m, +1, Variant.B),
                StateLabel(j, m, -1)]
    return [StateLabel(j, m, +1)]


def iter_states(j_max: int) -> Iterator[StateLabel]:
    """Every allowed state with j <= j_max, over all projections."""
    for j in range(j_max + 1):
        for m in range(-j, j + 1):
            yield from enumerate_states(j, m)


def helicity_decomposition(state: StateLabel) -> tuple[HelicityComponent, HelicityComponent]:
    """The two equal-weight pair-helicity components of a state.

    Equal-helicity states (total helicity 0) come out as (+1,+1) and (-1,-1);
    opposite-helicity states as (+1,-1) and (-1,+1).  The relative sign is +
    for the symmetric combinations and - for the antisymmetric ones.
    """
    j, parity, variant = state.j, state.parity, state.variant
    if j == 0 or (j % 2 == 0 and variant is Variant.A):
        return (HelicityComponent(1, 1, _SQRT_HALF),
                HelicityComponent(-1, -1, _SQRT_HALF if parity > 0 else -_SQRT_HALF))
    if j % 2 == 0 and parity == -1:
        return (HelicityComponent(1, 1, _SQRT_HALF),
                HelicityComponent(-1, -1, -_SQRT_HALF))
    if j % 2 == 0:  # variant B
        return (HelicityComponent(1, -1, _SQRT_HALF),
                HelicityComponent(-1, 1, _SQRT_HALF))
    return (HelicityComponent(1, -1, _SQRT_HALF),
            HelicityComponent(-1, 1, -_SQRT_HALF))


def amplitude(state: StateLabel, n: Direction, lambda1: int, lambda2: int) -> complex:
    """Momentum-space amplitude of the pair-helicity configuration
    (lambda1, lambda2) at emission direction n.

    Combines the helicity decomposition with the rotation matrix element of
    the state's angular momentum; configurations absent from the state give
    exactly zero.
    """
    if lambda1 not in (1, -1) or lambda2 not in (1, -1):
        raise DomainError("photon helicities must be +1 or -1")
    for comp in helicity_decomposition(state):
        if comp.lambda1 == lambda1 and comp.lambda2 == lambda2:
            pref = math.sqrt((2 * state.j + 1) / (4.0 * math.pi))
            phase = complex(math.cos(state.m * n.phi), math.sin(state.m * n.phi))
            return (comp.coefficient * pref * phase
                    * wigner_small_d(state.j, comp.total_helicity, state.m, n.theta))
    return 0j


def amplitude_vector(state: StateLabel, n: Direction) -> np.ndarray:
    """All four helicity-basis amplitudes at n, in the package basis order."""
    return np.array([amplitude(state, n, l1, l2) for l1, l2 in BASIS], dtype=complex)
