import numpy as np
import pytest
from scipy import stats

from tpss.distribution import classify, w_direct


@pytest.fixture
def angular_pvalue():
    """Chi-square p-value of sampled polar angles against the analytic density."""

    def _compute(state, thetas, bins=100, min_expected=10.0):
        edges = np.linspace(0.0, np.pi, bins + 1)
        observed, _ = np.histogram(thetas, bins=edges)
        nodes, weights = np.polynomial.legendre.leggauss(20)
        lam = classify(state)
        expected = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
            t = mid + half * nodes
            f = 2.0 * np.pi * w_direct(state.j, state.m, lam, t) * np.sin(t)
            expected.append(half * float(np.dot(weights, f)))
        expected = np.array(expected) * len(thetas)
        # merge bins until each carries enough expected counts
        merged_obs, merged_exp = [], []
        acc_o = acc_e = 0.0
        for o, e in zip(observed, expected):
            acc_o += o
            acc_e += e
            if acc_e >= min_expected:
                merged_obs.append(acc_o)
                merged_exp.append(acc_e)
                acc_o = acc_e = 0.0
        if acc_e > 0 and merged_exp:
            merged_obs[-1] += acc_o
            merged_exp[-1] += acc_e
        merged_obs = np.array(merged_obs)
        merged_exp = np.array(merged_exp)
        chi2 = float(((merged_obs - merged_exp) ** 2 / merged_exp).sum())
        return float(stats.chi2.sf(chi2, len(merged_obs) - 1))

    return _compute
