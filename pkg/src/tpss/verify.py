"""Cross-route verification suite.

Every closed-form result in the package has an independent computational
route; this module runs all of the pairwise comparisons at their pinned
tolerances and reports one pass/fail result per check.  The CLI `verify`
subcommand and the acceptance tests are both thin wrappers around
:func:`run_all`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlations import (
    circular_parity_blindness,
    closed_form_W,
    linear_analyzer,
)
from .distribution import Method, classify, w_direct, w_series
from .errors import NoIntensityError
from .polarization import (
    W2_THRESHOLD,
    density_matrix,
    polarization_params,
)
from .states import Direction, StateLabel, amplitude_vector, iter_states, state_counts

__all__ = ["CheckResult", "run_all", "CHECKS"]

TOL_DISTRIBUTION_EQUIV = 1e-10
TOL_NORMALIZATION = 1e-9
TOL_ISOTROPY = 1e-14
TOL_PARAM_EQUIV = 1e-9
TOL_UNIT_CIRCLE = 1e-10
TOL_SPECIAL_ANGLE = 1e-12
TOL_HERMITIAN = 1e-14
TOL_TRACE = 1e-14
PSD_FLOOR = -1e-12
TOL_PURITY = 1e-10
TOL_RECONSTRUCTION = 1e-10
TOL_CLOSED_FORM = 1e-12
TOL_PARITY_BLIND = 1e-14
TOL_COMPLETENESS = 1e-12

THETA_SAMPLES = np.linspace(0.0, math.pi, 50)
THETA_MIDPOINTS = (np.arange(10) + 0.5) * math.pi / 10.0
PSI_GRID = np.linspace(0.0, math.pi, 20, endpoint=False)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name, observed, tol, extra=""):
    note = f"max deviation {observed:.3e} (tol {tol:.0e})"
    if extra:
        note += "; " + extra
    return CheckResult(name, observed < tol, note)


def _valid_classes(j):
    classes = []
    if j % 2 == 0:
        classes.append(0)
    if j >= 2:
        classes.append(2)
    return classes


def check_state_enumeration() -> CheckResult:
    """State counts per (j, parity) follow the selection rules up to j = 12."""
    expected = {0: (1, 1), 1: (0, 0)}
    for j in range(2, 13):
        expected[j] = (2, 1) if j % 2 == 0 else (1, 0)
    bad = [j for j in range(13) if state_counts(j) != expected[j]]
    detail = "counts match for all j <= 12" if not bad else f"mismatch at j={bad}"
    return CheckResult("state-enumeration", not bad, detail)


def check_distribution_equivalence(tol=TOL_DISTRIBUTION_EQUIV) -> CheckResult:
    """Direct and series routes agree pointwise for j <= 8."""
    worst = 0.0
    for j in range(9):
        for lam in _valid_classes(j):
            for m in range(-j, j + 1):
                direct = w_direct(j, m, lam, THETA_SAMPLES)
                series = w_series(j, m, lam, THETA_SAMPLES)
                worst = max(worst, float(np.abs(direct - series).max()))
    return _result("distribution-equivalence", worst, tol)


def check_distribution_normalization() -> CheckResult:
    """Every state's density integrates to 1; the j=0 density is isotropic."""
    nodes, weights = np.polynomial.legendre.leggauss(200)
    worst = 0.0
    for state in iter_states(8):
        lam = classify(state)
        values = w_direct(state.j, state.m, lam, np.arccos(nodes))
        integral = 2.0 * math.pi * float(np.dot(weights, values))
        worst = max(worst, abs(integral - 1.0))
    iso = 0.0
    for state in (StateLabel(0, 0, +1), StateLabel(0, 0, -1)):
        values = w_direct(0, 0, 0, THETA_SAMPLES)
        iso = max(iso, float(np.abs(values - 1.0 / (4.0 * math.pi)).max()))
    ok_norm = worst < TOL_NORMALIZATION
    ok_iso = iso < TOL_ISOTROPY
    detail = (f"normalization deviation {worst:.3e} (tol {TOL_NORMALIZATION:.0e}); "
              f"isotropy deviation {iso:.3e} (tol {TOL_ISOTROPY:.0e})")
    return CheckResult("distribution-normalization", ok_norm and ok_iso, detail)


def check_polarization_parameters(tol_equiv=TOL_PARAM_EQUIV) -> CheckResult:
    """Both parameter routes agree; (xi, zeta) stays on the unit circle; the
    forward and transverse special angles take their known values."""
    worst_equiv = 0.0
    worst_circle = 0.0
    worst_special = 0.0
    for j in range(2, 9):
        for m in range(-j, j + 1):
            for theta in THETA_SAMPLES:
                try:
                    direct = polarization_params(j, m, theta, Method.DIRECT)
                    series = polarization_params(j, m, theta, Method.SERIES)
                except NoIntensityError:
                    continue
                worst_equiv = max(worst_equiv,
                                  abs(direct.xi - series.xi),
                                  abs(direct.zeta - series.zeta))
                for p in (direct, series):
                    worst_circle = max(worst_circle, abs(p.xi**2 + p.zeta**2 - 1.0))
            if abs(m) == 2:
                fwd = polarization_params(j, m, 0.0)
                worst_special = max(worst_special,
                                    abs(fwd.xi - (1.0 if m == 2 else -1.0)),
                                    abs(fwd.zeta))
            try:
                side = polarization_params(j, m, math.pi / 2.0)
            except NoIntensityError:
                continue
            worst_special = max(worst_special, abs(side.xi),
                                abs(side.zeta - (-1.0) ** (j - m)))
    ok = (worst_equiv < tol_equiv and worst_circle < TOL_UNIT_CIRCLE
          and worst_special < TOL_SPECIAL_ANGLE)
    detail = (f"route disagreement {worst_equiv:.3e} (tol {tol_equiv:.0e}); "
              f"unit-circle deviation {worst_circle:.3e} (tol {TOL_UNIT_CIRCLE:.0e}); "
              f"special-angle deviation {worst_special:.3e} (tol {TOL_SPECIAL_ANGLE:.0e})")
    return CheckResult("polarization-parameters", ok, detail)


def check_density_matrices() -> CheckResult:
    """Every emitted matrix is Hermitian, unit-trace, PSD, and pure, and the
    amplitude outer product reconstructs intensity times matrix."""
    worst_herm = worst_trace = worst_purity = worst_recon = 0.0
    worst_eig = 0.0
    phi = 0.7
    for state in iter_states(6):
        lam = classify(state)
        thetas = THETA_MIDPOINTS if lam == 2 else THETA_MIDPOINTS[:1]
        for theta in thetas:
            try:
                pm = density_matrix(state, float(theta))
            except NoIntensityError:
                continue
            rho = pm.matrix
            worst_herm = max(worst_herm, float(np.abs(rho - rho.conj().T).max()))
            worst_trace = max(worst_trace, abs(np.trace(rho) - 1.0))
            worst_eig = min(worst_eig, float(np.linalg.eigvalsh(rho).min()))
            worst_purity = max(worst_purity, float(np.abs(rho @ rho - rho).max()))
            psi = amplitude_vector(state, Direction(float(theta), phi))
            outer = np.outer(psi, psi.conj())
            w = w_direct(state.j, state.m, lam, float(theta))
            worst_recon = max(worst_recon, float(np.abs(outer - w * rho).max()))
    ok = (worst_herm < TOL_HERMITIAN and worst_trace < TOL_TRACE
          and worst_eig > PSD_FLOOR and worst_purity < TOL_PURITY
          and worst_recon < TOL_RECONSTRUCTION)
    detail = (f"hermiticity {worst_herm:.3e}, trace {worst_trace:.3e}, "
              f"min eigenvalue {worst_eig:.3e}, purity {worst_purity:.3e}, "
              f"reconstruction {worst_recon:.3e} (tol {TOL_RECONSTRUCTION:.0e})")
    return CheckResult("density-matrix-properties", ok, detail)


def _trace_grid(rho: np.ndarray) -> np.ndarray:
    """Coincidence probabilities of rho over the 20x20 linear analyzer grid."""
    fwd = [linear_analyzer(p, "forward").matrix() for p in PSI_GRID]
    bwd = [linear_analyzer(p, "backward").matrix() for p in PSI_GRID]
    stack = np.stack([np.kron(a, b) for a in fwd for b in bwd])
    return np.einsum("kij,ji->k", stack, rho).real.reshape(len(PSI_GRID), len(PSI_GRID))


def check_correlation_closed_forms() -> CheckResult:
    """Trace-computed coincidence rates match the analytic laws, circular
    analyzers cannot tell the parities apart, and outcomes are complete."""
    psi_a, psi_b = np.meshgrid(PSI_GRID, PSI_GRID, indexing="ij")
    worst_law = 0.0
    for state in iter_states(4):
        if state.j not in (0, 2, 3, 4):
            continue
        lam = classify(state)
        if lam == 0:
            grid = _trace_grid(density_matrix(state).matrix)
            if state.parity > 0:
                analytic = 0.5 * np.cos(psi_a - psi_b) ** 2
            else:
                analytic = 0.5 * np.sin(psi_a - psi_b) ** 2
            worst_law = max(worst_law, float(np.abs(grid - analytic).max()))
        else:
            sign = 1.0 if state.j % 2 == 0 else -1.0
            for theta in (*THETA_MIDPOINTS, math.pi / 2.0):
                try:
                    pm = density_matrix(state, float(theta))
                    zeta = polarization_params(state.j, state.m, float(theta)).zeta
                except NoIntensityError:
                    continue
                grid = _trace_grid(pm.matrix)
                analytic = 0.25 * (1.0 + sign * zeta * np.cos(2.0 * (psi_a + psi_b)))
                worst_law = max(worst_law, float(np.abs(grid - analytic).max()))
                if theta == math.pi / 2.0:
                    # transverse emission: the law collapses to a pure
                    # squared cosine or sine of one analyzer angle
                    if state.m % 2 == 0:
                        transverse = 0.5 * np.cos(PSI_GRID) ** 2
                    else:
                        transverse = 0.5 * np.sin(PSI_GRID) ** 2
                    worst_law = max(worst_law,
                                    float(np.abs(grid[:, 0] - transverse).max()))
    worst_blind = 0.0
    worst_complete = 0.0
    for j in (0, 2, 4):
        for m in range(-j, j + 1):
            report = circular_parity_blindness(j, m)
            worst_blind = max(worst_blind, report.max_difference)
            worst_complete = max(worst_complete,
                                 abs(report.completeness[0] - 1.0),
                                 abs(report.completeness[1] - 1.0))
    ok = (worst_law < TOL_CLOSED_FORM and worst_blind < TOL_PARITY_BLIND
          and worst_complete < TOL_COMPLETENESS)
    detail = (f"closed-form deviation {worst_law:.3e} (tol {TOL_CLOSED_FORM:.0e}); "
              f"parity distinguishability {worst_blind:.3e} (tol {TOL_PARITY_BLIND:.0e}); "
              f"completeness deviation {worst_complete:.3e}")
    return CheckResult("correlation-closed-forms", ok, detail)


CHECKS = (
    check_state_enumeration,
    check_distribution_equivalence,
    check_distribution_normalization,
    check_polarization_parameters,
    check_density_matrices,
    check_correlation_closed_forms,
)


def run_all(inject_failure: bool = False) -> list[CheckResult]:
    """Run every check; inject_failure tightens one tolerance to zero as a
    negative control of the harness itself."""
    results = []
    for check in CHECKS:
        if inject_failure and check is check_distribution_equivalence:
            results.append(check_distribution_equivalence(tol=0.0))
        else:
            results.append(check())
    return results
