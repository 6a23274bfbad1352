"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Samplers.PathSampler import PathSampler

import numpy as np

"""
Euler-Maruyama sampling of the bridge SDE

    dU = [B(t) U + beta(t)] dt + S(t) dB,
    B = Q - S S^T E(T,t)^T Gamma(t,T)^-1,
    beta = S S^T (Gamma(t,T)^T)^-1 m_b^-(t,T) + r

on n_steps uniform points of [0, T - eps_pin], followed by U_T = b. The drift
explodes at T, hence the gap eps_pin (T / n_steps by default, which makes
the whole grid uniform).
"""


def sde_grid(T, n_steps, eps_pin=None):
    """
    The Euler grid: n_steps uniform points on [0, T - eps_pin] and T.
    """
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 2:
        raise ValueError('Unacceptable value for n_steps: %s ' % n_steps)

    if eps_pin is None:
        eps_pin = T / n_steps
    if not 0 < eps_pin < T / 2:
        raise ValueError('eps_pin must lie in (0, T/2), got %s' % eps_pin)

    return np.append(np.linspace(0.0, T - eps_pin, n_steps), T)


class BridgeSDESampler(PathSampler):
    method = 'bridge_sde'

    def __init__(self, kernel, eps_pin=None, threads=None, keep=None):
        """
        :param kernel: the BridgeKernel
        :param eps_pin: gap between the last Euler point and T
        :param threads: worker threads
        :param keep: Euler grid times to store, all if None; 0 and T are
                     always kept
        """
        super(BridgeSDESampler, self).__init__(kernel, threads)
        self.eps_pin = eps_pin
        self.keep_times = None if keep is None else \
            np.asarray(keep, dtype=float).ravel()
        self.drift = None
        self.offsets = None
        self.noise = None
        self.steps = None
        self.euler_grid = None
        self.keep = None

    def initialize(self, n_steps):
        """
        Precompute drift and noise coefficients on the Euler grid.

        :param n_steps: number of Euler grid points before the pin
        :return: nothing
        """
        grid = sde_grid(self.kernel.T, n_steps, self.eps_pin)
        euler = grid[:-1]
        h = np.diff(euler)

        keep = np.ones(len(grid), dtype=bool)
        if self.keep_times is not None:
            keep = np.isin(grid, self.keep_times)
            keep[0] = keep[-1] = True
            missing = np.setdiff1d(self.keep_times, grid)
            if len(missing):
                raise ValueError('Times %s are not on the Euler grid'
                                 % missing.tolist())

        drift, offsets = [], []
        for t in euler[:-1]:
            B, beta = self.kernel.bridge_drift(t)
            drift.append(B)
            offsets.append(beta)

        d = self.d
        self.steps = h
        self.drift = np.array(drift).reshape(-1, d, d)
        self.offsets = np.array(offsets).reshape(-1, d)
        self.noise = self.kernel.model.S.evaluate_many(euler[:-1])
        self.euler_grid = grid
        self.keep = keep
        self.grid = grid[keep]

    def sample_block(self, rng, n):
        steps = len(self.steps)
        p = self.kernel.model.p
        normals = rng.standard_normal((n, steps, p))

        out = np.empty((n, len(self.grid), self.d))
        x = np.tile(self.kernel.a, (n, 1))
        out[:, 0] = x
        j = 1
        for i in range(steps):
            h = self.steps[i]
            x = x + h * (x @ self.drift[i].T + self.offsets[i]) \
                + np.sqrt(h) * normals[:, i] @ self.noise[i].T
            if self.keep[i + 1]:
                out[:, j] = x
                j += 1

        out[:, -1] = self.kernel.b
        return out

    def moments(self):
        """
        Exact mean and covariance of the Euler scheme on the full Euler grid,
        by the deterministic recursion
        m' = (I + B h) m + beta h,  C' = (I + B h) C (I + B h)^T + S S^T h.

        :return: (grid, means (n_times, d), covariances (n_times, d, d))
        """
        d = self.d
        n = len(self.euler_grid)
        means = np.empty((n, d))
        covs = np.zeros((n, d, d))
        means[0] = self.kernel.a

        for i, h in enumerate(self.steps):
            F = np.eye(d) + h * self.drift[i]
            means[i + 1] = F @ means[i] + h * self.offsets[i]
            covs[i + 1] = F @ covs[i] @ F.T + \
                h * self.noise[i] @ self.noise[i].T

        means[-1] = self.kernel.b
        covs[-1] = 0.0
        return self.euler_grid, means, covs


def sample_bridge_sde(kernel, n_steps, n_paths, seed, eps_pin=None,
                      threads=None, config=None, keep=None):
    """
    Euler-Maruyama bridge paths pinned at T.

    :param keep: Euler grid times to store, all if None
    :return: a PathEnsemble with method bridge_sde
    """
    sampler = BridgeSDESampler(kernel, eps_pin, threads, keep)
    sampler.initialize(n_steps)
    return sampler.sample(n_paths, seed, config)


def euler_moments(kernel, n_steps, eps_pin=None):
    """
    Exact moments of the Euler scheme of the bridge SDE.

    :return: (grid, means, covariances)
    """
    sampler = BridgeSDESampler(kernel, eps_pin)
    sampler.initialize(n_steps)
    return sampler.moments()
