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
Exact sampling of the bridge U by its Markov transitions
U_{t'} ~ N(n_{U_t,b}(t, t'), Sigma(t, t')). A last grid point at T is set to b.
"""


class ExactBridgeSampler(PathSampler):
    method = 'bridge_exact'

    def __init__(self, kernel, threads=None):
        super(ExactBridgeSampler, self).__init__(kernel, threads)
        self.transitions = None
        self.offsets = None
        self.factors = None
        self.pinned = False

    def initialize(self, grid):
        grid = validate_grid(grid, self.kernel.T)
        self.pinned = grid[-1] == self.kernel.T

        steps = list(zip(grid[:-1], grid[1:]))
        if self.pinned:
            steps = steps[:-1]

        transitions, offsets, factors = [], [], []
        for s, t in steps:
            A, c, Sigma = self.kernel.bridge_transition(s, t)
            transitions.append(A)
            offsets.append(c)
            factors.append(check_pd(Sigma, 'Sigma(%g, %g)' % (s, t)))

        d = self.d
        self.transitions = np.array(transitions).reshape(-1, d, d)
        self.offsets = np.array(offsets).reshape(-1, d)
        self.factors = np.array(factors).reshape(-1, d, d)
        self.grid = grid

    def sample_block(self, rng, n):
        steps = len(self.transitions)
        normals = rng.standard_normal((n, steps, self.d))

        out = np.empty((n, len(self.grid), self.d))
        out[:, 0] = self.kernel.a
        for i in range(steps):
            out[:, i + 1] = out[:, i] @ self.transitions[i].T + \
                self.offsets[i] + normals[:, i] @ self.factors[i].T

        if self.pinned:
            out[:, -1] = self.kernel.b
        return out


def sample_bridge_exact(kernel, grid, n_paths, seed, threads=None,
                        config=None):
    """
    Exact bridge paths from a on the grid.

    :return: a PathEnsemble with method bridge_exact
    """
    sampler = ExactBridgeSampler(kernel, threads)
    sampler.initialize(grid)
    return sampler.sample(n_paths, seed, config)
