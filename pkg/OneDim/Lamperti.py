"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from OneDim.ScalarModel import ScalarModel, m_1d
from Samplers.PathSampler import PathSampler, validate_grid

import numpy as np

"""
The time change representation of the scalar linear process

    Z_t = m_{x0}(0, t) + exp(qbar(t)) W(tau(t)),  tau(t) = int_0^t exp(-2 qbar(u)) sigma(u)^2 du

with W a standard Wiener process.
"""


def lamperti_time_change(m, t):
    """
    The clock tau(t).
    """
    if t < 0:
        raise ValueError('Unacceptable value for t: %s ' % t)

    def integrand(us):
        return np.exp(-2.0 * m.qbar_many(us)) * \
            m.sigma.evaluate_many(us)[:, 0, 0] ** 2

    return m.integrate(integrand, 0.0, t)


def lamperti_transform(m, times, wiener_values, x0=0.0):
    """
    Map standard Wiener values W(tau(t_i)) to values of Z.

    :param m: the ScalarModel
    :param times: the times t_i
    :param wiener_values: array (n_times,) or (n_paths, n_times)
    :param x0: start point of Z
    :return: array of the shape of wiener_values
    """
    times = np.asarray(times, dtype=float).ravel()
    wiener_values = np.asarray(wiener_values, dtype=float)
    if wiener_values.shape[-1] != len(times):
        raise ValueError('%d Wiener values for %d times'
                         % (wiener_values.shape[-1], len(times)))

    means = np.array([m_1d(m, x0, 0.0, t) for t in times])
    scales = np.exp(m.qbar_many(times))
    return means + scales * wiener_values


class LampertiSampler(PathSampler):
    method = 'lamperti_z'

    def __init__(self, kernel, z0=None, threads=None):
        super(LampertiSampler, self).__init__(kernel, threads)
        self.scalar = ScalarModel.from_linear_model(kernel.model,
                                                    probe_horizon=kernel.T)
        self.z0 = float(np.ravel(kernel.a if z0 is None else z0)[0])
        self.clock = None
        self.means = None
        self.scales = None

    def initialize(self, grid):
        grid = validate_grid(grid, self.kernel.T)
        self.clock = np.array([lamperti_time_change(self.scalar, t)
                               for t in grid])
        self.means = lamperti_transform(self.scalar, grid,
                                        np.zeros(len(grid)), self.z0)
        self.scales = np.exp(self.scalar.qbar_many(grid))
        self.grid = grid

    def sample_block(self, rng, n):
        steps = len(self.grid) - 1
        normals = rng.standard_normal((n, steps))

        w = np.zeros((n, steps + 1))
        w[:, 1:] = np.cumsum(normals * np.sqrt(np.diff(self.clock)), axis=1)
        return (self.means + self.scales * w)[:, :, None]


def sample_lamperti_z(kernel, z0, grid, n_paths, seed, threads=None,
                      config=None):
    """
    Paths of a scalar Z through the time changed Wiener process.

    :return: a PathEnsemble with method lamperti_z
    """
    sampler = LampertiSampler(kernel, z0, threads)
    sampler.initialize(grid)
    return sampler.sample(n_paths, seed, config)
