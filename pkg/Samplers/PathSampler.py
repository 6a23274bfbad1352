"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Samplers.PathEnsemble import PathEnsemble
from Samplers.RandomStreams import run_blocks, stream_ids, check_seed

from abc import ABC, abstractmethod

import logging
import numpy as np

"""
PathSampler is the abstract class of all path samplers. A sampler precomputes
its per-step coefficients once in initialize() and then fills blocks of paths
with a vectorized recursion in sample_block(); the block driver takes care of
random streams and threads.
"""

logger = logging.getLogger(__name__)


def validate_grid(grid, T, start_at_zero=True):
    """
    Check a sampling grid: strictly increasing, within [0, T], starting at 0.

    :return: the grid as a float array
    """
    grid = np.asarray(grid, dtype=float).ravel()

    if len(grid) == 0:
        raise ValueError('Empty sampling grid')
    if np.any(np.diff(grid) <= 0):
        raise ValueError('Sampling grid must be strictly increasing')
    if grid[0] < 0 or grid[-1] > T:
        raise ValueError('Sampling grid must lie within [0, %g]' % T)
    if start_at_zero and grid[0] != 0:
        raise ValueError('Sampling grid must start at 0, got %g' % grid[0])

    return grid


class PathSampler(ABC):
    """
    Abstract sampler of path ensembles.
    """

    method = None

    def __init__(self, kernel, threads=None):
        """
        :param kernel: the BridgeKernel (or an object with the same
                       model, T, a and b attributes)
        :param threads: worker threads, None for all cores
        """
        self.kernel = kernel
        self.threads = threads
        self.grid = None

    @property
    def d(self):
        return self.kernel.d

    @abstractmethod
    def initialize(self, grid):
        """
        Precompute the coefficients of the recursion on a grid.

        :param grid: the sampling grid
        :return: nothing
        """
        pass

    @abstractmethod
    def sample_block(self, rng, n):
        """
        Draw n paths.

        :param rng: the numpy Generator of the block
        :param n: number of paths
        :return: array (n, n_times, d)
        """
        pass

    def model_hash(self):
        return self.kernel.model.model_hash()

    def sample(self, n_paths, seed, config=None):
        """
        Draw an ensemble on the initialized grid.

        :param n_paths: number of paths
        :param seed: master seed
        :param config: run configuration kept with the ensemble
        :return: a PathEnsemble
        """
        if self.grid is None:
            raise ValueError('Sampler %s is not initialized' % self.method)

        if not isinstance(n_paths, (int, np.integer)) or n_paths < 1:
            raise ValueError('Unacceptable value for n_paths: %s ' % n_paths)

        seed = check_seed(seed)
        states = np.empty((n_paths, len(self.grid), self.d))

        def fill(rng, start, stop):
            states[start:stop] = self.sample_block(rng, stop - start)

        run_blocks(n_paths, seed, fill, self.threads)
        logger.info('Sampled %d paths with %s on %d times', n_paths,
                    self.method, len(self.grid))

        return PathEnsemble(self.grid, states, self.method, seed,
                            stream_ids(n_paths), self.model_hash(),
                            T=self.kernel.T, a=self.kernel.a,
                            b=self.kernel.b, config=config)
