"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Samplers.ExactZSampler import ExactZSampler
from Samplers.PathSampler import PathSampler, validate_grid

from scipy import linalg

import numpy as np

"""
The anticipative representation of the bridge

    Y_t = Gamma(t,T) Gamma(0,T)^-1 a + Z_t - Gamma(0,t)^T (Gamma(0,T)^T)^-1 (Z_T - b)

where Z is the linear process started at 0. Y is not adapted to the driving
noise (it uses Z_T) but has the law of the bridge.
"""


def anticipative_coefficients(kernel, t):
    """
    The matrices (A_t, C_t) of Y_t = A_t a + Z_t - C_t (Z_T - b).
    """
    d = kernel.d
    T = kernel.T
    G_0T = kernel.gamma(0.0, T)
    lu = linalg.lu_factor(G_0T)

    if t == T:
        return np.zeros((d, d)), np.eye(d)
    if t == 0:
        return np.eye(d), np.zeros((d, d))

    A = kernel.gamma(t, T) @ linalg.lu_solve(lu, np.eye(d))
    C = linalg.lu_solve(lu, kernel.gamma(0.0, t)).T
    return A, C


class AnticipativeSampler(PathSampler):
    method = 'bridge_anticipative'

    def __init__(self, kernel, threads=None):
        super(AnticipativeSampler, self).__init__(kernel, threads)
        self.z_sampler = ExactZSampler(kernel, np.zeros(kernel.d))
        self.coefficients = None
        self.pinned = False

    def initialize(self, grid):
        grid = validate_grid(grid, self.kernel.T)
        self.pinned = grid[-1] == self.kernel.T

        z_grid = grid if self.pinned else np.append(grid, self.kernel.T)
        self.z_sampler.initialize(z_grid)

        self.coefficients = [anticipative_coefficients(self.kernel, t)
                             for t in grid]
        self.grid = grid

    def sample_block(self, rng, n):
        z = self.z_sampler.sample_block(rng, n)
        z_end = z[:, -1] - self.kernel.b
        a = self.kernel.a

        out = np.empty((n, len(self.grid), self.d))
        for i, (A, C) in enumerate(self.coefficients):
            out[:, i] = A @ a + z[:, i] - z_end @ C.T

        out[:, 0] = a
        if self.pinned:
            out[:, -1] = self.kernel.b
        return out


def sample_bridge_anticipative(kernel, grid, n_paths, seed, threads=None,
                               config=None):
    """
    Bridge paths by the anticipative representation.

    :return: a PathEnsemble with method bridge_anticipative
    """
    sampler = AnticipativeSampler(kernel, threads)
    sampler.initialize(grid)
    return sampler.sample(n_paths, seed, config)
