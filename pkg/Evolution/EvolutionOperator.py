"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Utilities.BridgeErrors import SolverError, HorizonError

from numpy.polynomial import legendre
from scipy.integrate import solve_ivp
from scipy.special import roots_legendre

import bisect
import logging
import threading
import numpy as np

"""
EvolutionOperator computes the evolution matrices E(t, s) of the homogeneous
system y' = Q(t) y.

The fundamental matrix Phi(t) = E(t, 0) and its inverse Psi(t) = E(0, t) are
integrated together from 0 (Phi' = Q Phi, Psi' = -Psi Q) and kept as dense
output, so that E(t, s) = Phi(t) Psi(s) for any pair of covered times. Table
coefficients are integrated knot to knot.
"""

logger = logging.getLogger(__name__)

# Above this condition number of Phi(s) the composition is replaced by a
# direct integration from s to t
COMPOSITION_COND_LIMIT = 1e8

ODE_METHOD = 'DOP853'


class EvolutionOperator:
    def __init__(self, model, rtol=1e-12, atol=1e-14, horizon=1.0):
        """
        :param model: the LinearModel
        :param rtol: relative tolerance of the ODE solver
        :param atol: absolute tolerance of the ODE solver
        :param horizon: initial time horizon to integrate to
        """

        if rtol <= 0 or atol <= 0:
            raise ValueError('Unacceptable ODE tolerances: rtol=%s atol=%s '
                             % (rtol, atol))

        self.model = model
        self.d = model.d
        self.rtol = rtol
        self.atol = atol

        self._lock = threading.Lock()
        self._frozen = False

        # Segment i covers [self._starts[i], self._ends[i]]
        self._starts = []
        self._ends = []
        self._solutions = []
        self._horizon = 0.0
        self._state = np.concatenate([np.eye(self.d).ravel(),
                                      np.eye(self.d).ravel()])

        with self._lock:
            self._extend(max(float(horizon), 0.0))

    @property
    def horizon(self):
        return self._horizon

    @property
    def frozen(self):
        return self._frozen

    def freeze(self):
        """
        Forbid further extension of the horizon. Reads are lock-free after
        this call.

        :return: nothing
        """
        with self._lock:
            self._frozen = True

    def _rhs(self, t, y):
        d2 = self.d * self.d
        Q = self.model.Q.evaluate(t)
        phi = y[:d2].reshape(self.d, self.d)
        psi = y[d2:].reshape(self.d, self.d)
        return np.concatenate([(Q @ phi).ravel(), (-psi @ Q).ravel()])

    def _breakpoints(self, t0, t1):
        points = [t0]
        if self.model.Q.kind == 'table':
            points += [k for k in self.model.Q.knots if t0 < k < t1]
        points.append(t1)
        return points

    def _extend(self, horizon):
        # Caller holds the lock
        if horizon <= self._horizon and self._solutions:
            return

        points = self._breakpoints(self._horizon, max(horizon, self._horizon))
        if len(points) == 2 and points[0] == points[1]:
            # Zero horizon, keep a trivial segment so lookups work
            points = [0.0, 1e-12]

        for t0, t1 in zip(points[:-1], points[1:]):
            sol = solve_ivp(self._rhs, (t0, t1), self._state,
                            method=ODE_METHOD, rtol=self.rtol,
                            atol=self.atol, dense_output=True)
            if sol.status < 0:
                raise SolverError('Evolution ODE failed on [%g, %g]: %s'
                                  % (t0, t1, sol.message))

            self._starts.append(t0)
            self._ends.append(t1)
            self._solutions.append(sol.sol)
            self._state = sol.y[:, -1]
            self._horizon = t1

        logger.debug('Evolution horizon extended to %g (%d segments)',
                     self._horizon, len(self._solutions))

    def _ensure(self, t):
        if t < 0:
            raise ValueError('Evolution is defined for t >= 0, got %g' % t)

        if t <= self._horizon:
            return

        if self._frozen:
            raise HorizonError('Time %g beyond the frozen evolution horizon '
                               '%g' % (t, self._horizon))

        with self._lock:
            if t > self._horizon:
                self._extend(max(t, 1.25 * self._horizon))

    def _fundamental(self, ts):
        """
        Phi(t) and Psi(t) for an array of times.

        :return: two arrays of shape (n, d, d)
        """
        ts = np.asarray(ts, dtype=float).ravel()
        if len(ts) == 0:
            empty = np.empty((0, self.d, self.d))
            return empty, empty.copy()

        self._ensure(float(ts.max()))
        if ts.min() < 0:
            raise ValueError('Evolution is defined for t >= 0')

        d2 = self.d * self.d
        states = np.empty((2 * d2, len(ts)))
        segment = np.searchsorted(np.asarray(self._ends), ts, side='left')
        segment = np.minimum(segment, len(self._solutions) - 1)
        for i in np.unique(segment):
            mask = segment == i
            states[:, mask] = self._solutions[i](ts[mask])

        phi = states[:d2].T.reshape(-1, self.d, self.d)
        psi = states[d2:].T.reshape(-1, self.d, self.d)
        return phi, psi

    def fundamental(self, t):
        """
        Phi(t) = E(t, 0).
        """
        return self._fundamental([t])[0][0]

    def _direct(self, s, t):
        if s == t:
            return np.eye(self.d)

        def rhs(u, y):
            return (self.model.Q.evaluate(u) @
                    y.reshape(self.d, self.d)).ravel()

        sol = solve_ivp(rhs, (s, t), np.eye(self.d).ravel(),
                        method=ODE_METHOD, rtol=self.rtol, atol=self.atol)
        if sol.status < 0:
            raise SolverError('Direct evolution ODE failed on [%g, %g]: %s'
                              % (s, t, sol.message))

        return sol.y[:, -1].reshape(self.d, self.d)

    def evolve(self, s, t):
        """
        The evolution matrix E(t, s), forwards or backwards in time.

        :param s: initial time
        :param t: final time
        :return: d x d matrix
        """
        if s == t:
            self._ensure(max(s, t))
            return np.eye(self.d)

        phi, psi = self._fundamental([t, s])
        if np.linalg.cond(phi[1]) > COMPOSITION_COND_LIMIT:
            logger.debug('Ill-conditioned composition at s=%g, integrating '
                         'directly', s)
            return self._direct(s, t)

        return phi[0] @ psi[1]

    def evolve_many(self, ts, s):
        """
        E(t_i, s) for many t_i and one s.

        :param ts: array of times
        :param s: the common initial time
        :return: array of shape (n, d, d)
        """
        ts = np.asarray(ts, dtype=float).ravel()
        phi, psi = self._fundamental(np.concatenate([ts, [s]]))

        if np.linalg.cond(phi[-1]) > COMPOSITION_COND_LIMIT:
            return np.stack([self._direct(s, t) for t in ts])

        return phi[:-1] @ psi[-1]

    def evolve_from_many(self, t, us):
        """
        E(t, u_i) for one t and many u_i, the integrand shape of the
        kernel quadratures.

        :param t: the common final time
        :param us: array of initial times
        :return: array of shape (n, d, d)
        """
        us = np.asarray(us, dtype=float).ravel()
        phi, psi = self._fundamental(np.concatenate([us, [t]]))

        out = phi[-1] @ psi[:-1]
        bad = np.linalg.cond(phi[:-1]) > COMPOSITION_COND_LIMIT
        for i in np.flatnonzero(bad):
            out[i] = self._direct(us[i], t)
        return out

    def evolve_series(self, s, t, terms=8, nodes=16):
        """
        Truncated Peano-Baker series of E(t, s), each iterated integral
        computed by Gauss-Legendre collocation. Independent of the ODE solver
        and meant as an oracle on short intervals. Table coefficients are
        expanded knot to knot and the pieces composed.

        :param s: initial time
        :param t: final time
        :param terms: number of series terms after the identity
        :param nodes: collocation nodes
        :return: d x d matrix
        """
        if s == t:
            return np.eye(self.d)

        if t < s:
            return np.linalg.inv(self.evolve_series(t, s, terms, nodes))

        points = self._breakpoints(s, t)
        if len(points) > 2:
            total = np.eye(self.d)
            for u0, u1 in zip(points[:-1], points[1:]):
                total = self._series_piece(u0, u1, terms, nodes) @ total
            return total

        return self._series_piece(s, t, terms, nodes)

    def _series_piece(self, s, t, terms, nodes):
        x, w = roots_legendre(nodes)
        half = 0.5 * (t - s)
        us = s + half * (x + 1.0)
        Qs = self.model.Q.evaluate_many(us)

        # integ[j, i] = integral from -1 to x_j of the i-th Lagrange basis
        # polynomial on the nodes
        basis = np.linalg.inv(legendre.legvander(x, nodes - 1))
        antider = legendre.legint(basis, lbnd=-1)
        integ = legendre.legval(x, antider).T

        term = np.broadcast_to(np.eye(self.d), (nodes, self.d, self.d))
        total = np.eye(self.d)
        for _ in range(terms):
            integrand = Qs @ term
            total = total + half * np.tensordot(w, integrand, axes=1)
            term = half * np.tensordot(integ, integrand, axes=1)

        return total

    def growth_bound(self, s, t):
        """
        The bound ||E(t, s)|| <= exp(L |t - s|) with L the maximum of ||Q||
        sampled over the interval.
        """
        L = self.model.Q.max_norm(s, t)
        return float(np.exp(L * abs(t - s)))
