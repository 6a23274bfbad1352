"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Kernels.BridgeKernel import check_pd
from Utilities.BridgeErrors import NotPD

from scipy import linalg

import numpy as np

"""
GaussLaw is a finite dimensional Gaussian law N(mean, cov). The Cholesky
factor and the log-determinant are computed once; a covariance that is only
positive semi-definite gives a degenerate law that can be sampled but has no
density.
"""

LOG_2PI = np.log(2.0 * np.pi)


class GaussLaw:
    def __init__(self, mean, cov):
        """
        :param mean: vector of length n
        :param cov: symmetric n x n matrix
        """

        mean = np.array(mean, dtype=float).ravel()
        cov = np.array(cov, dtype=float).reshape(len(mean), len(mean))

        scale = max(1.0, np.abs(cov).max()) if cov.size else 1.0
        if np.abs(cov - cov.T).max(initial=0.0) > 1e-8 * scale:
            raise ValueError('Covariance matrix is not symmetric')

        self.mean = mean
        self.cov = 0.5 * (cov + cov.T)
        self.dim = len(mean)
        self.degenerate = False
        self.chol = None
        self.logdet = 0.0

        if self.dim == 0:
            self.chol = np.zeros((0, 0))
            return

        try:
            self.chol = check_pd(self.cov, 'Gaussian covariance')
            self.logdet = 2.0 * float(np.sum(np.log(np.diag(self.chol))))
        except NotPD:
            self.degenerate = True
            self.logdet = -np.inf
            self._root = self._psd_root()

    def _psd_root(self):
        vals, vecs = np.linalg.eigh(self.cov)
        if vals.min() < -1e-10 * max(1.0, vals.max()):
            raise NotPD('Covariance matrix is not positive semi-definite')
        return vecs * np.sqrt(np.clip(vals, 0.0, None))

    @property
    def root(self):
        """
        A square root R of the covariance, cov = R R^T.
        """
        return self._root if self.degenerate else self.chol

    def logpdf(self, y):
        """
        Log-density at y.
        """
        if self.degenerate:
            raise NotPD('Degenerate Gaussian law has no density')

        y = np.asarray(y, dtype=float).ravel()
        z = linalg.solve_triangular(self.chol, y - self.mean, lower=True)
        return float(-0.5 * (z @ z + self.logdet + self.dim * LOG_2PI))

    def pdf(self, y):
        return float(np.exp(self.logpdf(y)))

    def marginal(self, indices):
        """
        The law of the coordinates in indices.
        """
        indices = np.asarray(indices, dtype=int)
        return GaussLaw(self.mean[indices],
                        self.cov[np.ix_(indices, indices)])

    def block(self, i, size):
        """
        The law of the i-th block of length size.
        """
        return self.marginal(np.arange(i * size, (i + 1) * size))

    def condition(self, observed, values):
        """
        The law of the other coordinates given the coordinates in observed
        equal values.

        :param observed: indices of the observed coordinates
        :param values: the observed values
        :return: a GaussLaw
        """
        observed = np.asarray(observed, dtype=int)
        free = np.setdiff1d(np.arange(self.dim), observed)
        values = np.asarray(values, dtype=float).ravel()

        if len(free) == 0:
            return GaussLaw(np.zeros(0), np.zeros((0, 0)))

        K_oo = self.cov[np.ix_(observed, observed)]
        K_fo = self.cov[np.ix_(free, observed)]
        L = check_pd(K_oo, 'observed covariance')

        gain = linalg.cho_solve((L, True), K_fo.T).T
        mean = self.mean[free] + gain @ (values - self.mean[observed])
        cov = self.cov[np.ix_(free, free)] - gain @ K_fo.T
        return GaussLaw(mean, 0.5 * (cov + cov.T))

    def sample(self, normals):
        """
        Transform standard normal draws into draws of this law.

        :param normals: array of shape (..., n)
        :return: array of shape (..., n)
        """
        normals = np.asarray(normals, dtype=float)
        return self.mean + normals @ self.root.T
