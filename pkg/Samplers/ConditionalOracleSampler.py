"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.ConditionalLaw import conditional_fdd
from Samplers.PathSampler import PathSampler

import numpy as np

"""
Independent draws from the conditional law of (Z_t1, ..., Z_tn) given
Z_T = b. This is the law-level oracle of the bridge samplers; its ensemble
carries exactly the requested times.
"""


class ConditionalOracleSampler(PathSampler):
    method = 'conditional_oracle'

    def __init__(self, kernel, threads=None):
        super(ConditionalOracleSampler, self).__init__(kernel, threads)
        self.law = None

    def initialize(self, times):
        self.law = conditional_fdd(self.kernel, times)
        self.grid = np.asarray(times, dtype=float).ravel()

    def sample_block(self, rng, n):
        n_times = len(self.grid)
        if n_times == 0:
            return np.empty((n, 0, self.d))

        normals = rng.standard_normal((n, n_times * self.d))
        return self.law.sample(normals).reshape(n, n_times, self.d)


def sample_conditional_oracle(kernel, times, n_paths, seed, threads=None,
                              config=None):
    """
    Draws of the conditional finite dimensional law; no times gives an empty
    ensemble.

    :return: a PathEnsemble with method conditional_oracle
    """
    sampler = ConditionalOracleSampler(kernel, threads)
    sampler.initialize(times)
    return sampler.sample(n_paths, seed, config)
