"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.GaussLaw import GaussLaw
from Utilities.BridgeErrors import GridMismatch
from Verify.VerifyReport import VerifyReport

import numpy as np

"""
Empirical first and second moments of a path ensemble, and z-statistic
comparisons against exact Gaussian laws or against another ensemble.

Standard errors use the Gaussian asymptotics
    SE(mean_i)  = sqrt(C_ii / n)
    SE(C_ij)    = sqrt((C_ii C_jj + C_ij^2) / (n - 1))
"""

# Below this, the difference of two exact zeros counts as a match
ZERO_SE_ATOL = 1e-12


class MomentSummary:
    def __init__(self, times, means, cov, n_paths):
        """
        :param times: the grid times
        :param means: array (n_times, d)
        :param cov: joint covariance over all times and coordinates,
                    (n_times d) x (n_times d)
        :param n_paths: the number of paths behind the estimates
        """
        self.times = np.asarray(times, dtype=float).ravel()
        self.means = np.asarray(means, dtype=float)
        self.cov = np.asarray(cov, dtype=float)
        self.n_paths = int(n_paths)
        self.d = self.means.shape[1]

    @property
    def n_times(self):
        return len(self.times)

    def block(self, i):
        """
        The covariance matrix at the i-th time.
        """
        d = self.d
        return self.cov[i * d:(i + 1) * d, i * d:(i + 1) * d]

    @property
    def blocks(self):
        return np.array([self.block(i) for i in range(self.n_times)])

    def se_mean(self):
        """
        Standard errors of the means, array (n_times, d).
        """
        return np.sqrt(np.clip(np.diag(self.cov), 0.0, None) /
                       self.n_paths).reshape(self.n_times, self.d)

    def se_cov(self):
        """
        Standard errors of the joint covariance entries.
        """
        return covariance_se(self.cov, self.n_paths)


def covariance_se(cov, n_paths):
    var = np.clip(np.diag(cov), 0.0, None)
    return np.sqrt((np.outer(var, var) + cov ** 2) / max(n_paths - 1, 1))


def estimate_moments(ensemble):
    """
    Unbiased sample means and covariances of an ensemble.

    :param ensemble: a PathEnsemble with at least two paths
    :return: a MomentSummary
    """
    n = ensemble.n_paths
    if n < 2:
        raise ValueError('Moments need at least 2 paths, got %d' % n)

    flat = ensemble.states.reshape(n, -1)
    means = flat.mean(axis=0)
    centered = flat - means
    cov = centered.T @ centered / (n - 1)

    return MomentSummary(ensemble.grid, means.reshape(ensemble.n_times, -1),
                         0.5 * (cov + cov.T), n)


def _z(diff, se):
    if se > 0:
        return abs(diff) / se
    return 0.0 if abs(diff) <= ZERO_SE_ATOL else np.inf


def _time_label(t):
    return '%.6g' % t


def _as_joint(ms, laws):
    d = ms.d
    n = ms.n_times

    if isinstance(laws, GaussLaw):
        if laws.dim != n * d:
            raise GridMismatch('Joint law of dimension %d for %d times of '
                               'dimension %d' % (laws.dim, n, d))
        return laws.mean.reshape(n, d), laws.cov, True

    laws = list(laws)
    if len(laws) != n:
        raise GridMismatch('%d laws for %d grid times' % (len(laws), n))

    mean = np.zeros((n, d))
    cov = np.zeros((n * d, n * d))
    for i, law in enumerate(laws):
        if law.dim != d:
            raise GridMismatch('Law %d has dimension %d, expected %d'
                               % (i, law.dim, d))
        mean[i] = law.mean
        cov[i * d:(i + 1) * d, i * d:(i + 1) * d] = law.cov
    return mean, cov, False


def _entries(ms, joint):
    """
    Index pairs of the covariance entries to compare: the upper triangle of
    every time block, and of the cross-time blocks for joint laws.
    """
    size = ms.n_times * ms.d
    for i in range(size):
        for j in range(i, size):
            if joint or i // ms.d == j // ms.d:
                yield i, j


def _entry_name(ms, prefix, i, j):
    d = ms.d
    ti, tj = ms.times[i // d], ms.times[j // d]
    if ti == tj:
        return '%scov[t=%s][%d,%d]' % (prefix, _time_label(ti), i % d, j % d)
    return '%scov[t=%s,%s][%d,%d]' % (prefix, _time_label(ti),
                                      _time_label(tj), i % d, j % d)


def compare_to_law(ms, laws, k_sigma=4.0, times=None, prefix='',
                   report=None):
    """
    z-statistics of every mean and covariance entry against an exact law.
    The standard errors are those of the exact law.

    :param ms: the MomentSummary
    :param laws: one GaussLaw per grid time, or one joint GaussLaw over all
                 times (then cross-time covariances are compared too)
    :param k_sigma: the pass threshold on |z|
    :param times: grid of the laws, checked against the summary
    :param prefix: prefix of the check names
    :param report: a VerifyReport to extend, a new one if None
    :return: the VerifyReport
    """
    if times is not None:
        times = np.asarray(times, dtype=float).ravel()
        if len(times) != ms.n_times or np.any(times != ms.times):
            raise GridMismatch('Law grid %s differs from ensemble grid %s'
                               % (times.tolist(), ms.times.tolist()))

    mean, cov, joint = _as_joint(ms, laws)
    report = VerifyReport('compare') if report is None else report

    se_m = np.sqrt(np.clip(np.diag(cov), 0.0, None) / ms.n_paths)
    se_m = se_m.reshape(ms.n_times, ms.d)
    for i, t in enumerate(ms.times):
        for k in range(ms.d):
            report.add_check('%smean[t=%s][%d]' % (prefix, _time_label(t), k),
                             _z(ms.means[i, k] - mean[i, k], se_m[i, k]),
                             k_sigma)

    se_c = covariance_se(cov, ms.n_paths)
    for i, j in _entries(ms, joint):
        report.add_check(_entry_name(ms, prefix, i, j),
                         _z(ms.cov[i, j] - cov[i, j], se_c[i, j]), k_sigma)

    return report


def compare_ensembles(ms1, ms2, k_sigma=4.0, prefix='', report=None):
    """
    Two-sample z-statistics of the means and per-time covariances of two
    summaries on the same grid.

    :return: the VerifyReport
    """
    if ms1.n_times != ms2.n_times or np.any(ms1.times != ms2.times):
        raise GridMismatch('Ensemble grids differ: %s vs %s'
                           % (ms1.times.tolist(), ms2.times.tolist()))
    if ms1.d != ms2.d:
        raise GridMismatch('Ensemble dimensions differ: %d vs %d'
                           % (ms1.d, ms2.d))

    report = VerifyReport('compare') if report is None else report

    se_m = np.sqrt(ms1.se_mean() ** 2 + ms2.se_mean() ** 2)
    for i, t in enumerate(ms1.times):
        for k in range(ms1.d):
            report.add_check('%smean[t=%s][%d]' % (prefix, _time_label(t), k),
                             _z(ms1.means[i, k] - ms2.means[i, k],
                                se_m[i, k]), k_sigma)

    se_c = np.sqrt(ms1.se_cov() ** 2 + ms2.se_cov() ** 2)
    for i, j in _entries(ms1, False):
        report.add_check(_entry_name(ms1, prefix, i, j),
                         _z(ms1.cov[i, j] - ms2.cov[i, j], se_c[i, j]),
                         k_sigma)

    return report
