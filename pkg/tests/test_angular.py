"""Kernel tests: rotation matrix elements, 3j symbols, Legendre polynomials.

Expected values come from independent oracles: the textbook closed forms for
spin-2 rotation elements, a Rodrigues-form polynomial expansion for Legendre,
and exact rational arithmetic for the 3j orthogonality sums.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tpss.angular import (
    legendre_coeffs,
    legendre_p,
    wigner_3j,
    wigner_3j_exact,
    wigner_3j_product_exact,
    wigner_small_d,
)
from tpss.errors import DomainError

THETAS = np.linspace(0.0, math.pi, 10)


# --- rotation matrix elements ------------------------------------------------

def test_small_d_is_kronecker_at_zero():
    for j in range(5):
        for m1 in range(-j, j + 1):
            for m2 in range(-j, j + 1):
                assert wigner_small_d(j, m1, m2, 0.0) == (1.0 if m1 == m2 else 0.0)


# closed-form spin-2 table in the Condon-Shortley convention
_D2_TABLE = {
    (0, 0): lambda t: (3 * np.cos(t) ** 2 - 1) / 2,
    (1, 1): lambda t: (1 + np.cos(t)) / 2 * (2 * np.cos(t) - 1),
    (1, 0): lambda t: -math.sqrt(1.5) * np.sin(t) * np.cos(t),
    (1, -1): lambda t: (1 - np.cos(t)) / 2 * (2 * np.cos(t) + 1),
    (2, 2): lambda t: ((1 + np.cos(t)) / 2) ** 2,
    (2, 1): lambda t: -(1 + np.cos(t)) / 2 * np.sin(t),
    (2, 0): lambda t: math.sqrt(3 / 8) * np.sin(t) ** 2,
    (2, -1): lambda t: -(1 - np.cos(t)) / 2 * np.sin(t),
    (2, -2): lambda t: ((1 - np.cos(t)) / 2) ** 2,
}


@pytest.mark.parametrize("m1,m2", sorted(_D2_TABLE))
def test_small_d_spin2_closed_forms(m1, m2):
    expected = _D2_TABLE[(m1, m2)](THETAS)
    got = np.array([wigner_small_d(2, m1, m2, t) for t in THETAS])
    assert np.abs(got - expected).max() < 1e-12


def test_small_d_reflection_symmetry():
    # d^j_{m1 m2}(pi - t) = (-1)^(j - m2) d^j_{-m1 m2}(t)
    ts = np.linspace(0.0, math.pi, 20)
    worst = 0.0
    for j in range(9):
        for m1 in range(-j, j + 1):
            for m2 in range(-j, j + 1):
                lhs = wigner_small_d(j, m1, m2, math.pi - ts)
                rhs = (-1.0) ** (j - m2) * wigner_small_d(j, -m1, m2, ts)
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    assert worst < 1e-12


def test_small_d_orthogonality_quadrature():
    # integral over [0, pi] of d^j d^j' sin(t) dt = 2 delta_jj' / (2j + 1)
    nodes, weights = np.polynomial.legendre.leggauss(200)
    ts = np.arccos(nodes)
    worst = 0.0
    for j in range(5):
        for jp in range(5):
            for m1 in range(-min(j, jp), min(j, jp) + 1):
                for m2 in range(-min(j, jp), min(j, jp) + 1):
                    val = float(np.dot(weights,
                                       wigner_small_d(j, m1, m2, ts)
                                       * wigner_small_d(jp, m1, m2, ts)))
                    target = 2.0 / (2 * j + 1) if j == jp else 0.0
                    worst = max(worst, abs(val - target))
    assert worst < 1e-9


def test_small_d_log_factorial_branch():
    # above the exact-coefficient limit the stabilized branch must still
    # return a diagonal delta at zero and stay bounded by one
    assert wigner_small_d(25, 13, 13, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert wigner_small_d(25, 13, 7, 0.0) == 0.0
    vals = [wigner_small_d(25, 13, 7, t) for t in THETAS]
    assert max(abs(v) for v in vals) <= 1.0 + 1e-9


@given(st.data())
def test_small_d_bounded(data):
    j = data.draw(st.integers(0, 10))
    m1 = data.draw(st.integers(-j, j))
    m2 = data.draw(st.integers(-j, j))
    theta = data.draw(st.floats(0.0, math.pi, allow_nan=False))
    assert abs(wigner_small_d(j, m1, m2, theta)) <= 1.0 + 1e-12


def test_small_d_domain_errors():
    with pytest.raises(DomainError):
        wigner_small_d(2, 3, 0, 0.5)
    with pytest.raises(DomainError):
        wigner_small_d(2, 0, -3, 0.5)
    with pytest.raises(DomainError):
        wigner_small_d(-1, 0, 0, 0.5)
    with pytest.raises(DomainError):
        wigner_small_d(2, 0, 0, math.nan)


# --- 3j symbols ---------------------------------------------------------------

def test_threej_triangle_violation_is_zero():
    assert wigner_3j(1, 1, 3, 0, 0, 0) == 0.0
    assert wigner_3j(2, 2, 5, 1, -1, 0) == 0.0  # odd sum with equal pair
    assert wigner_3j(2, 1, 0, 0, 0, 0) == 0.0  # j3 below |j1 - j2|


def test_threej_projection_sum_violation_is_zero():
    assert wigner_3j(2, 2, 2, 1, 1, 1) == 0.0


def test_threej_j_zero_closed_form():
    for j in range(7):
        for m in range(-j, j + 1):
            expected = (-1.0) ** (j - m) / math.sqrt(2 * j + 1)
            assert wigner_3j(j, j, 0, m, -m, 0) == pytest.approx(expected, abs=1e-14)


def test_threej_stretched_value():
    # frozen from the exact-arithmetic run: the symbol equals exactly 1/3
    assert wigner_3j_exact(2, 2, 4, 2, 2, -4) == (1, Fraction(1, 9))
    assert wigner_3j(2, 2, 4, 2, 2, -4) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_threej_domain_error():
    with pytest.raises(DomainError):
        wigner_3j(1, 1, 2, 2, 0, -2)


def _triangle_fraction(j1, j2, j3):
    f = math.factorial
    return Fraction(f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3),
                    f(j1 + j2 + j3 + 1))


@pytest.mark.parametrize("j1,j2", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_threej_orthogonality_exact(j1, j2):
    # sums over m1, m2 reproduce delta_{j3 j3'} delta_{m3 m3'} / (2 j3 + 1)
    # entirely in rational arithmetic
    f = math.factorial
    for j3 in range(abs(j1 - j2), j1 + j2 + 1):
        for j3p in range(abs(j1 - j2), j1 + j2 + 1):
            for m3 in range(-min(j3, j3p), min(j3, j3p) + 1):
                if j3 == j3p:
                    acc = Fraction(0)
                    for m1 in range(-j1, j1 + 1):
                        m2 = -m3 - m1
                        if abs(m2) > j2:
                            continue
                        _, square = wigner_3j_exact(j1, j2, j3, m1, m2, m3)
                        acc += square
                    assert acc == Fraction(1, 2 * j3 + 1)
                else:
                    # every term shares the irrational factor
                    # sqrt(triangle(j3) triangle(j3') H); the rational
                    # remainder must cancel exactly
                    common = (_triangle_fraction(j1, j2, j3)
                              * _triangle_fraction(j1, j2, j3p)
                              * f(j3 + m3) * f(j3 - m3) * f(j3p + m3) * f(j3p - m3))
                    acc = Fraction(0)
                    for m1 in range(-j1, j1 + 1):
                        m2 = -m3 - m1
                        if abs(m2) > j2:
                            continue
                        sa, qa = wigner_3j_exact(j1, j2, j3, m1, m2, m3)
                        sb, qb = wigner_3j_exact(j1, j2, j3p, m1, m2, m3)
                        if sa == 0 or sb == 0:
                            continue
                        ratio = qa * qb / common
                        num = math.isqrt(ratio.numerator)
                        den = math.isqrt(ratio.denominator)
                        assert num * num == ratio.numerator
                        assert den * den == ratio.denominator
                        acc += sa * sb * Fraction(num, den)
                    assert acc == 0


def test_threej_product_exact_matches_float_product():
    for j, L in [(2, 2), (3, 4), (4, 6)]:
        for m in range(-j, j + 1):
            exact = wigner_3j_product_exact(j, j, L, (2, -2, 0), (m, -m, 0))
            approx = wigner_3j(j, j, L, 2, -2, 0) * wigner_3j(j, j, L, m, -m, 0)
            assert float(exact) == pytest.approx(approx, abs=1e-15)


# --- Legendre polynomials -----------------------------------------------------

def _rodrigues_oracle(n, x):
    # P_n(x) = 2^-n sum_k C(n, k)^2 (x - 1)^(n - k) (x + 1)^k, exact in rationals
    xf = Fraction(x)
    total = sum(Fraction(math.comb(n, k)) ** 2 * (xf - 1) ** (n - k) * (xf + 1) ** k
                for k in range(n + 1))
    return float(total / 2**n)


def test_legendre_against_rodrigues_oracle():
    xs = np.linspace(-1.0, 1.0, 50)
    for n in range(11):
        for x in xs:
            assert legendre_p(n, float(x)) == pytest.approx(
                _rodrigues_oracle(n, float(x)), abs=1e-12)


def test_legendre_trivia():
    for x in (-1.0, -0.3, 0.0, 0.7, 1.0):
        assert legendre_p(0, x) == 1.0
    for n in range(21):
        assert legendre_p(n, 1.0) == 1.0
    assert legendre_p(2, 0.0) == pytest.approx(-0.5, abs=1e-15)


def test_legendre_domain_error():
    with pytest.raises(DomainError):
        legendre_p(3, 1.0000001)
    with pytest.raises(DomainError):
        legendre_p(-1, 0.0)


def test_legendre_coeffs_match_evaluation():
    assert legendre_coeffs(2) == (Fraction(-1, 2), Fraction(0), Fraction(3, 2))
    x = 0.375  # exactly representable
    for n in range(9):
        poly = legendre_coeffs(n)
        value = float(sum(c * Fraction(x) ** i for i, c in enumerate(poly)))
        assert legendre_p(n, x) == pytest.approx(value, abs=1e-14)
