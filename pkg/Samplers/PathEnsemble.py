"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

import numpy as np

"""
A PathEnsemble is a set of sampled trajectories on a common time grid,
together with the provenance needed to reproduce it.
"""

METHODS = ('exact_z', 'bridge_exact', 'bridge_sde', 'bridge_anticipative',
           'bridge_integral', 'conditional_oracle', 'lamperti_z')


class PathEnsemble:
    def __init__(self, grid, states, method, seed, stream_ids, model_hash,
                 T=None, a=None, b=None, config=None):
        """
        :param grid: strictly increasing times
        :param states: array (n_paths, n_times, d)
        :param method: the method tag
        :param seed: master seed
        :param stream_ids: random stream of every path
        :param model_hash: hash of the model that was sampled
        :param T: bridge horizon
        :param a: start point
        :param b: end point
        :param config: run configuration to keep with the ensemble
        """

        if method not in METHODS:
            raise ValueError('Unknown sampling method: %s' % method)

        grid = np.asarray(grid, dtype=float).ravel()
        states = np.asarray(states, dtype=float)

        if states.ndim != 3 or states.shape[1] != len(grid):
            raise ValueError('States of shape %s do not match a grid of %d '
                             'times' % (states.shape, len(grid)))

        if np.any(np.diff(grid) <= 0):
            raise ValueError('Ensemble grid must be strictly increasing')

        self.grid = grid
        self.states = states
        self.method = method
        self.seed = seed
        self.stream_ids = np.asarray(stream_ids, dtype=int)
        self.model_hash = model_hash
        self.T = T
        self.a = None if a is None else np.asarray(a, dtype=float)
        self.b = None if b is None else np.asarray(b, dtype=float)
        self.config = dict(config) if config else {}

    @property
    def n_paths(self):
        return self.states.shape[0]

    @property
    def n_times(self):
        return self.states.shape[1]

    @property
    def d(self):
        return self.states.shape[2]

    def at(self, t):
        """
        States at grid time t.

        :return: array (n_paths, d)
        """
        idx = np.flatnonzero(self.grid == t)
        if len(idx) == 0:
            raise ValueError('Time %g is not on the ensemble grid' % t)
        return self.states[:, idx[0], :]

    def restrict(self, times):
        """
        The ensemble restricted to a subset of its grid.
        """
        idx = [int(np.flatnonzero(self.grid == t)[0])
               if np.any(self.grid == t) else -1 for t in times]
        if min(idx, default=0) < 0:
            raise ValueError('Times %s are not all on the ensemble grid'
                             % list(times))

        return PathEnsemble(self.grid[idx], self.states[:, idx, :],
                            self.method, self.seed, self.stream_ids,
                            self.model_hash, self.T, self.a, self.b,
                            self.config)

    def metadata(self):
        """
        Provenance as a JSON-ready dictionary.
        """
        return {'method': self.method,
                'seed': self.seed,
                'model_hash': self.model_hash,
                'grid': self.grid.tolist(),
                'n_paths': self.n_paths,
                'dim': self.d,
                'T': self.T,
                'a': None if self.a is None else self.a.tolist(),
                'b': None if self.b is None else self.b.tolist(),
                'config': self.config}

    def __eq__(self, other):
        if not isinstance(other, PathEnsemble):
            return NotImplemented
        return self.method == other.method and self.seed == other.seed and \
            self.model_hash == other.model_hash and \
            np.array_equal(self.grid, other.grid) and \
            np.array_equal(self.states, other.states)
