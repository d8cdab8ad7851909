"""Angular distribution of the pair-emission direction.

For a state with angular momentum ``j`` and projection ``m`` the emission
density over solid angle depends only on ``j``, ``m``, and the modulus of the
pair's total helicity (0 or 2) -- not on the parity.  Two independent
evaluation routes are provided:

* ``direct``: squares of rotation matrix elements;
* ``series``: an even-degree Legendre series with coupling-coefficient
  weights, assembled in exact rational arithmetic and converted to floating
  point only at the end.

Their pointwise agreement is one of the package's primary correctness
oracles.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .angular import (
    legendre_coeffs,
    poly_add_scaled,
    poly_eval_fraction,
    wigner_3j_product_exact,
    wigner_small_d,
)
from .errors import DomainError
from .states import StateLabel, Variant

__all__ = [
    "Method",
    "classify",
    "w_direct",
    "w_series",
    "AngularDistributionCurve",
    "tabulate_curve",
    "curves_to_csv",
    "curves_from_csv",
    "DEFAULT_GRID_POINTS",
]

DEFAULT_GRID_POINTS = 181

CURVE_CSV_HEADER = "theta_rad,w_sr_inv,method,state"


class Method(enum.Enum):
    """Evaluation route: rotation-matrix squares or exact Legendre series."""

    DIRECT = "direct"
    SERIES = "series"


def classify(state: StateLabel) -> int:
    """Helicity class of a state: 0 (equal helicities) or 2 (opposite)."""
    if state.j == 0:
        return 0
    if state.j % 2 == 1:
        return 2
    if state.parity == -1:
        return 0
    return 0 if state.variant is Variant.A else 2


def _check_args(j, m, lam):
    if lam not in (0, 2):
        raise DomainError(f"helicity class must be 0 or 2, got {lam!r}")
    if lam == 0 and j % 2 != 0:
        raise DomainError(f"helicity class 0 requires even j, got j={j}")
    if lam == 2 and j < 2:
        raise DomainError(f"helicity class 2 requires j >= 2, got j={j}")
    if abs(m) > j:
        raise DomainError(f"|m|={abs(m)} exceeds j={j}")


def _check_theta(theta):
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("theta must be finite")
    if np.any(arr < 0.0) or np.any(arr > math.pi):
        raise DomainError("theta must lie in [0, pi]")
    return arr


def w_direct(j, m, lam, theta):
    """Emission density per steradian from squared rotation matrix elements.

    ``lam`` is the helicity class (0 or 2); ``theta`` may be a scalar or an
    array of polar angles from the quantization axis.
    """
    _check_args(j, m, lam)
    arr = _check_theta(theta)
    up = wigner_small_d(j, lam, m, arr)
    dn = wigner_small_d(j, -lam, m, arr)
    return (2 * j + 1) / (8.0 * math.pi) * (up * up + dn * dn)


@lru_cache(maxsize=None)
def _w_poly(j, m, lam):
    """Exact ascending coefficients of the Legendre series in x = cos(theta).

    The density is ``(-1)^m (2j+1)/(4 pi)`` times this polynomial.
    """
    coeffs = [Fraction(0)]
    for n in range(j + 1):
        weight = (4 * n + 1) * wigner_3j_product_exact(
            j, j, 2 * n, (lam, -lam, 0), (m, -m, 0))
        if weight:
            coeffs = poly_add_scaled(coeffs, legendre_coeffs(2 * n), weight)
    return tuple(coeffs)


def w_series(j, m, lam, theta):
    """Emission density per steradian from the exact Legendre-series route."""
    _check_args(j, m, lam)
    arr = _check_theta(theta)
    poly = _w_poly(j, m, lam)
    scale = (-1.0 if m % 2 else 1.0) * (2 * j + 1) / (4.0 * math.pi)
    flat = np.atleast_1d(arr)
    out = np.array([scale * float(poly_eval_fraction(poly, Fraction(x)))
                    for x in np.cos(flat)])
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass
class AngularDistributionCurve:
    """Tabulated emission density w(theta) with its provenance."""

    state: StateLabel
    lam: int
    method: Method
    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.thetas.shape != self.values.shape:
            raise DomainError("curve theta and value arrays must match in shape")


def tabulate_curve(state: StateLabel, n_points: int = DEFAULT_GRID_POINTS,
                   method: Method = Method.DIRECT) -> AngularDistributionCurve:
    """Evaluate a state's emission density on a uniform grid over [0, pi]."""
    if n_points < 2:
        raise DomainError("curve grid needs at least 2 points")
    lam = classify(state)
    thetas = np.linspace(0.0, math.pi, n_points)
    fn = w_direct if method is Method.DIRECT else w_series
    return AngularDistributionCurve(state, lam, method, thetas,
                                    fn(state.j, state.m, lam, thetas))


def curves_to_csv(curves) -> str:
    """Delimited rendering, one row per sample; floats in shortest
    round-trip decimal."""
    if isinstance(curves, AngularDistributionCurve):
        curves = [curves]
    lines = [CURVE_CSV_HEADER]
    for curve in curves:
        token = curve.state.token
        name = curve.method.value
        for t, w in zip(curve.thetas, curve.values):
            lines.append(f"{float(t)!r},{float(w)!r},{name},{token}")
    return "\n".join(lines) + "\n"


def curves_from_csv(text: str) -> list[AngularDistributionCurve]:
    """Parse the curve CSV format back into curves (grouped by state+method)."""
    lines = text.strip().split("\n")
    if not lines or lines[0] != CURVE_CSV_HEADER:
        raise DomainError("unrecognized curve CSV header")
    groups: list[tuple[str, str, list[float], list[float]]] = []
    for line in lines[1:]:
        t, w, name, token = line.split(",")
        if not groups or groups[-1][0] != token or groups[-1][1] != name:
            groups.append((token, name, [], []))
        groups[-1][2].append(float(t))
        groups[-1][3].append(float(w))
    out = []
    for token, name, ts, ws in groups:
        state = StateLabel.parse(token)
        out.append(AngularDistributionCurve(state, classify(state), Method(name),
                                            np.array(ts), np.array(ws)))
    return out
