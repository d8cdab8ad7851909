"""Rotation matrix elements, 3j coupling symbols, and Legendre polynomials.

This is the numerical substrate for the rest of the package.  Only integer
angular momenta are supported, and the Condon-Shortley phase convention is
used throughout (single place where the convention is fixed; every identity
elsewhere is tested against it).

The 3j symbols are evaluated in exact big-integer rational arithmetic and
converted to floating point at the boundary.  The exact representation
(sign and squared value) is exposed so that the Legendre-series assemblies
in the distribution and polarization modules can be summed without any
floating-point cancellation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "wigner_small_d",
    "wigner_3j",
    "wigner_3j_exact",
    "wigner_3j_product_exact",
    "legendre_p",
    "legendre_coeffs",
]

# Above this j the factorials leave the comfortable float range and the term
# coefficients switch to log-gamma evaluation.
_EXACT_J_LIMIT = 20


def _require_int(value, name):
    if not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


@lru_cache(maxsize=None)
def _small_d_terms(j, m1, m2):
    """Term table for the defining factorial sum of d^j_{m1 m2}.

    Returns tuples ``(coefficient, cos_power, sin_power)`` such that

        d^j_{m1 m2}(theta) = sum_k coeff_k * cos(theta/2)**a_k * sin(theta/2)**b_k

    Coefficients are exact integer-factorial ratios (under one square root)
    for j <= 20 and log-gamma stabilized beyond.
    """
    lo = max(0, m2 - m1)
    hi = min(j + m2, j - m1)
    terms = []
    if j <= _EXACT_J_LIMIT:
        prod = (math.factorial(j + m1) * math.factorial(j - m1)
                * math.factorial(j + m2) * math.factorial(j - m2))
        for k in range(lo, hi + 1):
            den = (math.factorial(j + m2 - k) * math.factorial(k)
                   * math.factorial(m1 - m2 + k) * math.factorial(j - m1 - k))
            coeff = (-1) ** (m1 - m2 + k) * math.sqrt(float(Fraction(prod, den * den)))
            terms.append((coeff, 2 * j + m2 - m1 - 2 * k, m1 - m2 + 2 * k))
    else:
        lg = math.lgamma
        half = 0.5 * (lg(j + m1 + 1) + lg(j - m1 + 1) + lg(j + m2 + 1) + lg(j - m2 + 1))
        for k in range(lo, hi + 1):
            lden = lg(j + m2 - k + 1) + lg(k + 1) + lg(m1 - m2 + k + 1) + lg(j - m1 - k + 1)
            terms.append(((-1) ** (m1 - m2 + k) * math.exp(half - lden),
                          2 * j + m2 - m1 - 2 * k, m1 - m2 + 2 * k))
    return tuple(terms)


def wigner_small_d(j, m1, m2, theta):
    """Rotation matrix element d^j_{m1 m2}(theta) about the y axis.

    Parameters
    ----------
    j : int
        Angular momentum, j >= 0.
    m1, m2 : int
        Row and column projections, |m1| <= j and |m2| <= j.
    theta : float or ndarray
        Rotation angle in radians.

    Returns
    -------
    float or ndarray
        d^j_{m1 m2}(theta) in the Condon-Shortley convention, so that
        d^j_{m1 m2}(0) equals the Kronecker delta of m1 and m2.
    """
    j = _require_int(j, "j")
    m1 = _require_int(m1, "m1")
    m2 = _require_int(m2, "m2")
    if j < 0:
        raise DomainError(f"j must be non-negative, got {j}")
    if abs(m1) > j or abs(m2) > j:
        raise DomainError(f"projections out of range for j={j}: m1={m1}, m2={m2}")
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("theta must be finite")
    c = np.cos(arr / 2.0)
    s = np.sin(arr / 2.0)
    terms = _small_d_terms(j, m1, m2)
    if arr.ndim == 0:
        cf, sf = float(c), float(s)
        return math.fsum(co * cf**a * sf**b for co, a, b in terms)
    out = np.zeros_like(c)
    for co, a, b in terms:
        out += co * c**a * s**b
    return out


@lru_cache(maxsize=None)
def wigner_3j_exact(j1, j2, j3, m1, m2, m3):
    """Exact 3j symbol as ``(sign, squared_value)`` with the square a Fraction.

    Couplings that violate the triangle rule or the projection sum rule are
    legal inputs and return ``(0, Fraction(0))``.  Projections exceeding their
    angular momentum raise :class:`DomainError`.
    """
    js = tuple(_require_int(v, n) for v, n in ((j1, "j1"), (j2, "j2"), (j3, "j3")))
    ms = tuple(_require_int(v, n) for v, n in ((m1, "m1"), (m2, "m2"), (m3, "m3")))
    j1, j2, j3 = js
    m1, m2, m3 = ms
    if min(j1, j2, j3) < 0:
        raise DomainError("angular momenta must be non-negative")
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        raise DomainError(f"projection exceeds its angular momentum: "
                          f"({j1},{j2},{j3};{m1},{m2},{m3})")
    if m1 + m2 + m3 != 0 or j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0, Fraction(0)
    kmin = max(0, j2 - j3 - m1, j1 - j3 + m2)
    kmax = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    if kmin > kmax:
        return 0, Fraction(0)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (math.factorial(k) * math.factorial(j1 + j2 - j3 - k)
               * math.factorial(j1 - m1 - k) * math.factorial(j2 + m2 - k)
               * math.factorial(j3 - j2 + m1 + k) * math.factorial(j3 - j1 - m2 + k))
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0, Fraction(0)
    triangle = Fraction(
        math.factorial(j1 + j2 - j3) * math.factorial(j1 - j2 + j3) * math.factorial(-j1 + j2 + j3),
        math.factorial(j1 + j2 + j3 + 1))
    proj = (math.factorial(j1 + m1) * math.factorial(j1 - m1)
            * math.factorial(j2 + m2) * math.factorial(j2 - m2)
            * math.factorial(j3 + m3) * math.factorial(j3 - m3))
    phase = -1 if (j1 - j2 - m3) % 2 else 1
    sign = (1 if total > 0 else -1) * phase
    return sign, total * total * triangle * proj


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """3j symbol as a float (exact rational value rounded once at the end)."""
    sign, square = wigner_3j_exact(j1, j2, j3, m1, m2, m3)
    if sign == 0:
        return 0.0
    return sign * math.sqrt(float(square))


def _sqrt_fraction(f):
    """Exact square root of a perfect-square Fraction."""
    num = math.isqrt(f.numerator)
    den = math.isqrt(f.denominator)
    if num * num != f.numerator or den * den != f.denominator:
        raise DomainError("radicand is not a perfect rational square")
    return Fraction(num, den)


def wigner_3j_product_exact(j1, j2, j3, ms_a, ms_b, extra=Fraction(1)):
    """Exact rational product of two 3j symbols over a common (j1, j2, j3) triad.

    Computes ``3j(j1 j2 j3; ms_a) * 3j(j1 j2 j3; ms_b) * sqrt(extra)``.  The
    combined radicand must be a perfect rational square, which holds for the
    projection patterns used by the series assemblies in this package.
    """
    sa, qa = wigner_3j_exact(j1, j2, j3, *ms_a)
    sb, qb = wigner_3j_exact(j1, j2, j3, *ms_b)
    if sa == 0 or sb == 0:
        return Fraction(0)
    return sa * sb * _sqrt_fraction(qa * qb * extra)


def legendre_p(n, x):
    """Legendre polynomial P_n(x) by the stable three-term recurrence.

    Parameters
    ----------
    n : int
        Degree, n >= 0.
    x : float or ndarray
        Argument with |x| <= 1.
    """
    n = _require_int(n, "n")
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("legendre_p requires |x| <= 1")
    p_prev = np.ones_like(arr)
    if n == 0:
        return float(p_prev) if arr.ndim == 0 else p_prev
    p_cur = arr.copy()
    for k in range(1, n):
        p_prev, p_cur = p_cur, ((2 * k + 1) * arr * p_cur - k * p_prev) / (k + 1)
    return float(p_cur) if arr.ndim == 0 else p_cur


@lru_cache(maxsize=None)
def legendre_coeffs(n):
    """Exact Fraction coefficients of P_n, ascending order."""
    n = _require_int(n, "n")
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    p0 = (Fraction(1),)
    if n == 0:
        return p0
    p1 = (Fraction(0), Fraction(1))
    for k in range(1, n):
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(p1):
            nxt[i + 1] += Fraction(2 * k + 1, k + 1) * c
        for i, c in enumerate(p0):
            nxt[i] -= Fraction(k, k + 1) * c
        p0, p1 = p1, tuple(nxt)
    return p1


def poly_add_scaled(target, coeffs, scale):
    """target + scale * coeffs for ascending Fraction coefficient lists."""
    out = list(target) + [Fraction(0)] * max(0, len(coeffs) - len(target))
    for i, c in enumerate(coeffs):
        out[i] += scale * c
    return out


def poly_eval_fraction(coeffs, x):
    """Horner evaluation of an ascending coefficient list at an exact Fraction."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_fourth_derivative(coeffs):
    """Fourth derivative of an ascending coefficient list."""
    c = list(coeffs)
    for _ in range(4):
        c = [i * c[i] for i in range(1, len(c))] or [Fraction(0)]
    return c


def poly_mul_one_minus_x2_sq(coeffs):
    """Multiply an ascending coefficient list by (1 - x^2)^2."""
    out = [Fraction(0)] * (len(coeffs) + 4)
    for i, c in enumerate(coeffs):
        out[i] += c
        out[i + 2] -= 2 * c
        out[i + 4] += c
    return out
