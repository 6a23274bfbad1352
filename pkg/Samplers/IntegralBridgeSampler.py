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
from Samplers.PathSampler import PathSampler, validate_grid

import numpy as np

"""
The integral representation of the bridge

    U_t = n_{a,b}(0,t) + Gamma(t,T) int_0^t Gamma(u,T)^-1 S(u) dB_u

The stochastic integral W_t has independent Gaussian increments whose
covariance is the bridge noise Gramian, so it is sampled exactly on the grid.
"""


class IntegralBridgeSampler(PathSampler):
    method = 'bridge_integral'

    def __init__(self, kernel, threads=None):
        super(IntegralBridgeSampler, self).__init__(kernel, threads)
        self.means = None
        self.scales = None
        self.factors = None
        self.pinned = False

    def initialize(self, grid):
        grid = validate_grid(grid, self.kernel.T)
        self.pinned = grid[-1] == self.kernel.T
        inner = grid[:-1] if self.pinned else grid

        a = self.kernel.a
        self.means = np.array([self.kernel.bridge_mean(a, 0.0, t)
                               for t in inner]).reshape(-1, self.d)
        self.scales = np.array([self.kernel.gamma(t, self.kernel.T)
                                for t in inner]).reshape(-1, self.d, self.d)
        self.factors = np.array([
            check_pd(self.kernel.bridge_noise_gramian(s, t),
                     'noise Gramian on [%g, %g]' % (s, t))
            for s, t in zip(inner[:-1], inner[1:])]).reshape(-1, self.d,
                                                              self.d)
        self.grid = grid

    def sample_block(self, rng, n):
        steps = len(self.factors)
        normals = rng.standard_normal((n, steps, self.d))

        increments = np.einsum('nsj,sij->nsi', normals, self.factors)
        w = np.zeros((n, steps + 1, self.d))
        w[:, 1:] = np.cumsum(increments, axis=1)

        out = np.empty((n, len(self.grid), self.d))
        out[:, :steps + 1] = self.means + \
            np.einsum('nsj,sij->nsi', w, self.scales)
        out[:, 0] = self.kernel.a
        if self.pinned:
            out[:, -1] = self.kernel.b
        return out


def sample_bridge_integral(kernel, grid, n_paths, seed, threads=None,
                           config=None):
    """
    Bridge paths by the integral representation.

    :return: a PathEnsemble with method bridge_integral
    """
    sampler = IntegralBridgeSampler(kernel, threads)
    sampler.initialize(grid)
    return sampler.sample(n_paths, seed, config)
