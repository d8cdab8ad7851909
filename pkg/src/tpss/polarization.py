"""Two-photon polarization density matrices.

All 4x4 matrices act on the pair helicity basis in the fixed order
``(++, +-, -+, --)``, with sigma_3 diagonal in each photon's helicity basis
(sigma_3 |+-> = +-|+->).  This ordering is set once here and relied on by the
correlation and sampling modules.

Equal-helicity states have a parity-determined, direction-independent matrix.
Opposite-helicity states have a direction-dependent matrix parametrized by
two real numbers (xi, zeta) on the unit circle: xi is each photon's degree of
circular polarization and zeta scales the linear-correlation term.  Both
parameters come in two independently computed routes (rotation-matrix squares
versus an exact rational Legendre series), mirroring the distribution module.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .angular import (
    legendre_coeffs,
    poly_add_scaled,
    poly_eval_fraction,
    poly_fourth_derivative,
    poly_mul_one_minus_x2_sq,
    wigner_3j_product_exact,
    wigner_small_d,
)
from .distribution import Method, classify, _check_theta
from .errors import DomainError, NoIntensityError
from .states import BASIS_LABEL, StateLabel

__all__ = [
    "PAULI",
    "W2_THRESHOLD",
    "PolarizationParams",
    "PolarizationMatrix",
    "rho_parity",
    "polarization_params",
    "rho_eo",
    "density_matrix",
    "density_to_json",
    "density_from_json",
]

# Identity and the three Pauli matrices in the single-photon helicity basis.
PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# Below this pair intensity the conditional polarization state is undefined.
W2_THRESHOLD = 1e-12

HERMITICITY_TOL = 1e-14
TRACE_TOL = 1e-14
PSD_FLOOR = -1e-12


@dataclass(frozen=True)
class PolarizationParams:
    """Circular-polarization degree xi and linear-correlation weight zeta."""

    xi: float
    zeta: float
    method: Method


@dataclass
class PolarizationMatrix:
    """4x4 pair polarization density matrix with provenance metadata."""

    matrix: np.ndarray
    state: StateLabel | None = None
    theta: float | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (4, 4):
            raise DomainError("polarization matrix must be 4x4")

    def validate(self):
        """Raise DomainError unless Hermitian, unit trace, and PSD."""
        m = self.matrix
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise DomainError("polarization matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise DomainError("polarization matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < PSD_FLOOR:
            raise DomainError("polarization matrix has a negative eigenvalue")

    def reduced(self, photon: int) -> np.ndarray:
        """Single-photon 2x2 state obtained by tracing out the other photon."""
        m = self.matrix.reshape(2, 2, 2, 2)
        if photon == 1:
            return np.trace(m, axis1=1, axis2=3)
        if photon == 2:
            return np.trace(m, axis1=0, axis2=2)
        raise DomainError("photon index must be 1 or 2")


def _kron(i, j):
    return np.kron(PAULI[i], PAULI[j])


def rho_parity(parity: int, state: StateLabel | None = None) -> PolarizationMatrix:
    """Density matrix of an equal-helicity state; depends only on the parity.

    The photons are individually unpolarized (each reduced state is I/2) while
    the pair is in a pure, fully entangled polarization state.
    """
    if parity not in (+1, -1):
        raise DomainError(f"parity must be +1 or -1, got {parity!r}")
    if state is not None:
        if classify(state) != 0:
            raise DomainError(f"state {state.token} is not an equal-helicity state")
        if state.parity != parity:
            raise DomainError(f"state {state.token} has parity {state.parity:+d}, "
                              f"not {parity:+d}")
    m = 0.25 * (_kron(0, 0) + _kron(3, 3) + parity * (_kron(1, 1) - _kron(2, 2)))
    return PolarizationMatrix(m, state=state, theta=None)


@lru_cache(maxsize=None)
def _param_polys(j, m):
    """Exact polynomials (denominator W, xi numerator, zeta numerator) in
    x = cos(theta); the two parameters are the float ratios N/W."""
    den = [Fraction(0)]
    num_xi = [Fraction(0)]
    num_zeta = [Fraction(0)]
    for n in range(j + 1):
        even = 2 * n
        c_den = (4 * n + 1) * wigner_3j_product_exact(
            j, j, even, (2, -2, 0), (m, -m, 0))
        if c_den:
            den = poly_add_scaled(den, legendre_coeffs(even), c_den)
        if n >= 1:
            odd = 2 * n - 1
            c_xi = (4 * n - 1) * wigner_3j_product_exact(
                j, j, odd, (2, -2, 0), (m, -m, 0))
            if c_xi:
                num_xi = poly_add_scaled(num_xi, legendre_coeffs(odd), c_xi)
        if n >= 2:
            extra = Fraction(math.factorial(even - 4), math.factorial(even + 4))
            c_zeta = (4 * n + 1) * wigner_3j_product_exact(
                j, j, even, (2, 2, -4), (m, -m, 0), extra=extra)
            if c_zeta:
                # associated Legendre of order 4: (1-x^2)^2 d^4/dx^4 P_even
                assoc = poly_mul_one_minus_x2_sq(
                    poly_fourth_derivative(legendre_coeffs(even)))
                num_zeta = poly_add_scaled(num_zeta, assoc, c_zeta)
    return tuple(den), tuple(num_xi), tuple(num_zeta)


def polarization_params(j, m, theta, method: Method = Method.DIRECT) -> PolarizationParams:
    """(xi, zeta) for the opposite-helicity state with quantum numbers (j, m).

    Raises NoIntensityError where the pair intensity at theta falls below
    ``W2_THRESHOLD``: no pairs are emitted there, so the conditional
    polarization state does not exist.
    """
    if j < 2:
        raise DomainError(f"opposite-helicity states require j >= 2, got j={j}")
    if abs(m) > j:
        raise DomainError(f"|m|={abs(m)} exceeds j={j}")
    theta = float(_check_theta(theta))
    if method is Method.DIRECT:
        up = wigner_small_d(j, 2, m, theta)
        dn = wigner_small_d(j, -2, m, theta)
        norm = up * up + dn * dn
        w2 = (2 * j + 1) / (8.0 * math.pi) * norm
        if w2 <= W2_THRESHOLD:
            raise NoIntensityError(
                f"pair intensity {w2:.3e} at theta={theta:.6f} is below threshold")
        return PolarizationParams((up * up - dn * dn) / norm, 2.0 * up * dn / norm, method)
    den, num_xi, num_zeta = _param_polys(j, m)
    x = Fraction(math.cos(theta))
    den_val = poly_eval_fraction(den, x)
    w2 = (-1.0 if m % 2 else 1.0) * (2 * j + 1) / (4.0 * math.pi) * float(den_val)
    if w2 <= W2_THRESHOLD:
        raise NoIntensityError(
            f"pair intensity {w2:.3e} at theta={theta:.6f} is below threshold")
    return PolarizationParams(float(poly_eval_fraction(num_xi, x) / den_val),
                              float(poly_eval_fraction(num_zeta, x) / den_val),
                              method)


def rho_eo(state: StateLabel, theta, method: Method = Method.DIRECT) -> PolarizationMatrix:
    """Density matrix of an opposite-helicity state at polar angle theta.

    The correlation term enters with + sign for even j (variant b) and - sign
    for odd j.  The matrix is pure because xi**2 + zeta**2 = 1.
    """
    if classify(state) != 2:
        raise DomainError(f"state {state.token} is not an opposite-helicity state")
    params = polarization_params(state.j, state.m, theta, method)
    sign = 1.0 if state.j % 2 == 0 else -1.0
    m = 0.25 * (_kron(0, 0)
                + params.xi * (_kron(3, 0) - _kron(0, 3))
                - _kron(3, 3)
                + sign * params.zeta * (_kron(1, 1) + _kron(2, 2)))
    return PolarizationMatrix(m, state=state, theta=float(theta))


def density_matrix(state: StateLabel, theta=None,
                   method: Method = Method.DIRECT) -> PolarizationMatrix:
    """Density matrix for any state; theta is required for the
    opposite-helicity class and ignored for the equal-helicity class."""
    if classify(state) == 0:
        return rho_parity(state.parity, state)
    if theta is None:
        raise DomainError(
            f"state {state.token} needs an emission angle theta for its density matrix")
    return rho_eo(state, theta, method)


def density_to_json(pm: PolarizationMatrix) -> str:
    """JSON rendering: metadata plus a 4x4 array of [re, im] pairs."""
    doc: dict = {}
    if pm.state is not None:
        doc["state"] = pm.state.token
    if pm.theta is not None:
        doc["theta_rad"] = pm.theta
    doc["basis"] = BASIS_LABEL
    doc["matrix"] = [[[float(v.real), float(v.imag)] for v in row] for row in pm.matrix]
    return json.dumps(doc, indent=2) + "\n"


def density_from_json(text: str) -> PolarizationMatrix:
    doc = json.loads(text)
    if doc.get("basis") != BASIS_LABEL:
        raise DomainError(f"unexpected basis ordering {doc.get('basis')!r}")
    matrix = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
    state = StateLabel.parse(doc["state"]) if "state" in doc else None
    return PolarizationMatrix(matrix, state=state, theta=doc.get("theta_rad"))
