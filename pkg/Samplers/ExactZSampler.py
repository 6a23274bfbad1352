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
Exact sampling of the linear process Z with its Gaussian transitions

    Z_{t'} = E(t', t) Z_t + int_t^t' E(t', u) r(u) du + L xi,  L L^T = kappa(t, t')

There is no discretization bias.
"""


class ExactZSampler(PathSampler):
    method = 'exact_z'

    def __init__(self, kernel, z0=None, threads=None):
        """
        :param kernel: the BridgeKernel
        :param z0: start point, defaults to the bridge start a
        :param threads: worker threads
        """
        super(ExactZSampler, self).__init__(kernel, threads)

        z0 = kernel.a if z0 is None else z0
        self.z0 = np.array(z0, dtype=float).ravel()
        if len(self.z0) != kernel.d:
            raise ValueError('Start point must have length %d' % kernel.d)

        self.transitions = None
        self.offsets = None
        self.factors = None

    def initialize(self, grid):
        grid = validate_grid(grid, self.kernel.T)

        steps = list(zip(grid[:-1], grid[1:]))
        self.transitions = np.array([self.kernel.evolve(s, t)
                                     for s, t in steps]).reshape(-1, self.d,
                                                                 self.d)
        self.offsets = np.array([self.kernel.mean_forward(np.zeros(self.d),
                                                          s, t)
                                 for s, t in steps]).reshape(-1, self.d)
        self.factors = np.array([check_pd(self.kernel.kappa(s, t),
                                          'kappa(%g, %g)' % (s, t))
                                 for s, t in steps]).reshape(-1, self.d,
                                                             self.d)
        self.grid = grid

    def sample_block(self, rng, n):
        steps = len(self.grid) - 1
        normals = rng.standard_normal((n, steps, self.d))

        out = np.empty((n, len(self.grid), self.d))
        out[:, 0] = self.z0
        for i in range(steps):
            out[:, i + 1] = out[:, i] @ self.transitions[i].T + \
                self.offsets[i] + normals[:, i] @ self.factors[i].T
        return out


def sample_z(kernel, z0, grid, n_paths, seed, threads=None, config=None):
    """
    Exact paths of Z started at z0.

    :return: a PathEnsemble with method exact_z
    """
    sampler = ExactZSampler(kernel, z0, threads)
    sampler.initialize(grid)
    return sampler.sample(n_paths, seed, config)
