"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Evolution.EvolutionOperator import EvolutionOperator
from Kernels.Quadrature import GaussLegendre
from Utilities.BridgeErrors import NotPD, SingularGamma, HorizonError

from scipy import linalg

import logging
import numpy as np

"""
BridgeKernel computes, for a fixed horizon T and endpoints a, b, the kernels
of the linear process and of its bridge:

    kappa(s, t) = int_s^t E(t,u) S S^T E(t,u)^T du
    Gamma(s, t) = E(s, t) kappa(s, t)
    Sigma(s, t) = Gamma(t, T) Gamma(s, T)^-1 Gamma(s, t)
    n_{x,b}(s, t) = Gamma(t,T) Gamma(s,T)^-1 m_x^+(s,t)
                    + Gamma(s,t)^T (Gamma(s,T)^T)^-1 m_b^-(t,T)

Construction runs a positive definiteness probe of kappa and freezes the
evolution operator; afterwards every method is pure and thread-safe.
"""

logger = logging.getLogger(__name__)

GAMMA_COND_WARNING = 1e10
GAMMA_COND_LIMIT = 1e15
KAPPA_CACHE_SIZE = 4096


def check_pd(matrix, what='matrix'):
    """
    Cholesky factor of a symmetric positive definite matrix.

    :param matrix: the matrix
    :param what: name used in the error message
    :return: the lower triangular factor
    """
    matrix = np.atleast_2d(matrix)
    try:
        factor = linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError:
        raise NotPD('%s is not positive definite' % what)

    if not np.all(np.isfinite(factor)) or np.any(np.diag(factor) <= 0):
        raise NotPD('%s is not positive definite' % what)

    return factor


def symmetrize(matrix):
    return 0.5 * (matrix + matrix.T)


class BridgeKernel:
    def __init__(self, model, T, a, b, evolution=None, quad_rtol=1e-10,
                 quad_atol=1e-14, horizon_eps=None, probe_points=6):
        """
        :param model: the LinearModel
        :param T: the bridge horizon, T > 0
        :param a: start point (length d)
        :param b: end point (length d)
        :param evolution: an EvolutionOperator to share, built if None
        :param quad_rtol: relative tolerance of the kernel quadratures
        :param quad_atol: absolute tolerance of the kernel quadratures
        :param horizon_eps: guard below T, defaults to 1e-9 T
        :param probe_points: intervals of the kappa probe grid on [0, T]
        """

        T = float(T)
        if not np.isfinite(T) or T <= 0:
            raise ValueError('Unacceptable value for T: %s ' % T)

        a = np.array(a, dtype=float).ravel()
        b = np.array(b, dtype=float).ravel()
        if len(a) != model.d or len(b) != model.d:
            raise ValueError('Endpoints must have length %d, got %d and %d'
                             % (model.d, len(a), len(b)))

        if probe_points < 1:
            raise ValueError('Unacceptable value for probe_points: %s '
                             % probe_points)

        self.model = model
        self.d = model.d
        self.T = T
        self.a = a
        self.b = b
        self.a.setflags(write=False)
        self.b.setflags(write=False)
        self.horizon_eps = 1e-9 * T if horizon_eps is None \
            else float(horizon_eps)

        if evolution is None:
            evolution = EvolutionOperator(model, horizon=T)
        elif evolution.model is not model:
            raise ValueError('Evolution operator belongs to another model')

        self.evolution = evolution
        self.quadrature = GaussLegendre(rtol=quad_rtol, atol=quad_atol)
        self._has_r = model.has_drift_offset()
        self._kappa_cache = {}

        # Make sure the operator covers [0, T] before freezing
        self.evolution.evolve(0.0, T)
        if not self.evolution.frozen:
            self.evolution.freeze()

        self.probe = self._probe(probe_points)

    @classmethod
    def from_config(cls, model, config, **kwargs):
        """
        Build a kernel from the BRIDGE and NUMERICS sections of a run
        configuration. Missing endpoints default to the origin.
        """
        bridge = config.get('BRIDGE') or {}
        numerics = config.get('NUMERICS') or {}

        T = float(bridge.get('T', 1.0))
        a = bridge.get('a')
        b = bridge.get('b')
        a = np.zeros(model.d) if a is None else a
        b = np.zeros(model.d) if b is None else b

        evolution = EvolutionOperator(model,
                                      rtol=numerics.get('ode_rtol', 1e-12),
                                      atol=numerics.get('ode_atol', 1e-14),
                                      horizon=T)

        return cls(model, T, a, b, evolution=evolution,
                   quad_rtol=numerics.get('quad_rtol', 1e-10),
                   quad_atol=numerics.get('quad_atol', 1e-14),
                   horizon_eps=numerics.get('horizon_eps'),
                   probe_points=numerics.get('probe_points', 6), **kwargs)

    def _probe(self, probe_points):
        grid = np.linspace(0.0, self.T, probe_points + 1)
        pairs = [(s, t) for i, s in enumerate(grid) for t in grid[i + 1:]]

        for s, t in pairs:
            check_pd(self.kappa(s, t), 'kappa(%g, %g)' % (s, t))

        logger.debug('kappa probe passed on %d pairs', len(pairs))
        return {'grid': grid.tolist(), 'pairs': len(pairs), 'passed': True}

    def _breakpoints(self, s, t):
        points = set()
        for coeff in (self.model.Q, self.model.r, self.model.S):
            if coeff.kind == 'table':
                points.update(k for k in coeff.knots if s < k < t)
        return [s] + sorted(points) + [t]

    def integrate(self, f, s, t):
        """
        Quadrature of a vectorized matrix integrand over [s, t], split at
        the table knots of the model.
        """
        if s == t:
            return self.quadrature.integrate(f, s, t)

        lo, hi = min(s, t), max(s, t)
        points = self._breakpoints(lo, hi)
        total = sum(self.quadrature.integrate(f, u0, u1)
                    for u0, u1 in zip(points[:-1], points[1:]))
        return total if s < t else -total

    def _check_order(self, s, t):
        if s < 0 or t < s:
            raise ValueError('Kernel times must satisfy 0 <= s <= t, got '
                             's=%g t=%g' % (s, t))

    def _check_horizon(self, t, allow_T=False):
        if allow_T and t == self.T:
            return
        if t > self.T - self.horizon_eps:
            raise HorizonError('Time %.17g is within %g of the horizon T=%g'
                               % (t, self.horizon_eps, self.T))

    def evolve(self, s, t):
        """
        E(t, s).
        """
        return self.evolution.evolve(s, t)

    def _kappa(self, s, t):
        cached = self._kappa_cache.get((s, t))
        if cached is not None:
            return cached

        def integrand(us):
            Es = self.evolution.evolve_from_many(t, us)
            return Es @ self.model.noise_many(us) @ Es.transpose(0, 2, 1)

        value = symmetrize(self.integrate(integrand, s, t))
        if len(self._kappa_cache) >= KAPPA_CACHE_SIZE:
            self._kappa_cache.clear()
        self._kappa_cache[(s, t)] = value
        return value

    def kappa(self, s, t):
        """
        The Kalman covariance kappa(s, t), symmetrized.

        :param s: start time
        :param t: end time, t >= s
        :return: d x d matrix
        """
        s, t = float(s), float(t)
        self._check_order(s, t)
        if s == t:
            return np.zeros((self.d, self.d))
        return self._kappa(s, t).copy()

    def gamma(self, s, t):
        """
        Gamma(s, t) = E(s, t) kappa(s, t).
        """
        s, t = float(s), float(t)
        self._check_order(s, t)
        if s == t:
            return np.zeros((self.d, self.d))
        return self.evolve(t, s) @ self.kappa(s, t)

    def gamma_direct(self, s, t):
        """
        Gamma(s, t) by its own quadrature of E(s,u) S S^T E(t,u)^T.
        """
        s, t = float(s), float(t)
        self._check_order(s, t)

        def integrand(us):
            Es = self.evolution.evolve_from_many(s, us)
            Et = self.evolution.evolve_from_many(t, us)
            return Es @ self.model.noise_many(us) @ Et.transpose(0, 2, 1)

        return self.integrate(integrand, s, t)

    def _factor_gamma(self, G, what):
        cond = np.linalg.cond(G)
        if not np.isfinite(cond) or cond > GAMMA_COND_LIMIT:
            raise SingularGamma('%s is singular (cond=%g)' % (what, cond))
        if cond > GAMMA_COND_WARNING:
            logger.warning('%s is ill-conditioned (cond=%g)', what, cond)

        return linalg.lu_factor(G)

    def gamma_to_T(self, t):
        """
        Gamma(t, T) together with its LU factorization.
        """
        t = float(t)
        self._check_horizon(t)
        G = self.gamma(t, self.T)
        return G, self._factor_gamma(G, 'Gamma(%g, T)' % t)

    def gamma_inv(self, t):
        """
        Gamma(t, T)^-1.
        """
        _, lu = self.gamma_to_T(t)
        return linalg.lu_solve(lu, np.eye(self.d))

    def _r_integral(self, anchor, s, t):
        # int_s^t E(anchor, u) r(u) du
        if not self._has_r or s == t:
            return np.zeros(self.d)

        def integrand(us):
            return self.evolution.evolve_from_many(anchor, us) @ \
                self.model.r.evaluate_many(us)

        return self.integrate(integrand, s, t)[:, 0]

    def m_plus(self, x, s, t):
        """
        m_x^+(s, t) = x + int_s^t E(s,u) r(u) du.
        """
        self._check_order(s, t)
        return np.asarray(x, dtype=float) + self._r_integral(s, s, t)

    def m_minus(self, x, s, t):
        """
        m_x^-(s, t) = x - int_s^t E(t,u) r(u) du.
        """
        self._check_order(s, t)
        return np.asarray(x, dtype=float) - self._r_integral(t, s, t)

    def mean_forward(self, x, s, t):
        """
        m_x(s, t) = E(t,s) x + int_s^t E(t,u) r(u) du, the mean of Z_t given
        Z_s = x.
        """
        self._check_order(s, t)
        x = np.asarray(x, dtype=float)
        return self.evolve(s, t) @ x + self._r_integral(t, s, t)

    def bridge_transition(self, s, t):
        """
        The affine form of the bridge transition from s to t:
        n_{x,b}(s, t) = A x + c with covariance Sigma(s, t).

        :return: (A, c, Sigma)
        """
        s, t = float(s), float(t)
        self._check_order(s, t)
        self._check_horizon(s)
        self._check_horizon(t, allow_T=True)

        if s == t:
            return np.eye(self.d), np.zeros(self.d), \
                np.zeros((self.d, self.d))

        if t == self.T:
            # Gamma(T, T) = 0 and m_b^-(T, T) = b
            return np.zeros((self.d, self.d)), self.b.copy(), \
                np.zeros((self.d, self.d))

        _, lu_sT = self.gamma_to_T(s)
        G_st = self.gamma(s, t)
        G_tT = self.gamma(t, self.T)
        offset = self._r_integral(s, s, t)

        A = G_tT @ linalg.lu_solve(lu_sT, np.eye(self.d))
        # Gamma(s,t)^T (Gamma(s,T)^T)^-1 m_b^-(t,T)
        back = linalg.lu_solve(lu_sT, self.m_minus(self.b, t, self.T),
                               trans=1)
        c = A @ offset + G_st.T @ back
        Sigma = symmetrize(A @ G_st)
        return A, c, Sigma

    def sigma_bridge(self, s, t):
        """
        The bridge covariance Sigma(s, t); zero for t = s and t = T.
        """
        return self.bridge_transition(s, t)[2]

    def bridge_mean(self, x, s, t):
        """
        The bridge mean n_{x,b}(s, t). Returns b for t = T and x for t = s.
        """
        s, t = float(s), float(t)
        x = np.asarray(x, dtype=float)
        if t == self.T:
            self._check_order(s, t)
            return self.b.copy()
        if t == s:
            return x.copy()

        A, c, _ = self.bridge_transition(s, t)
        return A @ x + c

    def cov_z(self, s, t):
        """
        Cov(Z_s, Z_t) = (E(t,0) Gamma(0,s))^T for s <= t, Z_0 deterministic.
        """
        self._check_order(s, t)
        return (self.evolve(0.0, t) @ self.gamma(0.0, s)).T

    def cov_bridge(self, s, t):
        """
        Cov(U_s, U_t) = (Gamma(t,T) Gamma(0,T)^-1 Gamma(0,s))^T for s <= t.
        """
        self._check_order(s, t)
        if t == self.T or s == 0:
            return np.zeros((self.d, self.d))

        self._check_horizon(t)
        _, lu_0T = self.gamma_to_T(0.0)
        return (self.gamma(t, self.T) @
                linalg.lu_solve(lu_0T, self.gamma(0.0, s))).T

    def bridge_noise_gramian(self, s, t):
        """
        int_s^t Gamma(u,T)^-1 S S^T (Gamma(u,T)^T)^-1 du, the covariance of
        the noise integral of the integral representation.
        """
        s, t = float(s), float(t)
        self._check_order(s, t)
        self._check_horizon(t)

        def integrand(us):
            out = np.empty((len(us), self.d, self.d))
            for i, u in enumerate(us):
                inv = self.gamma_inv(u)
                out[i] = inv @ self.model.noise(u) @ inv.T
            return out

        return symmetrize(self.integrate(integrand, s, t))

    def bridge_drift(self, t):
        """
        Coefficients of the bridge SDE drift B(t) U + beta(t) with
        B = Q - S S^T E(T,t)^T Gamma(t,T)^-1 and
        beta = S S^T (Gamma(t,T)^T)^-1 m_b^-(t,T) + r.

        :return: (B, beta)
        """
        t = float(t)
        _, lu = self.gamma_to_T(t)
        N = self.model.noise(t)

        inv = linalg.lu_solve(lu, np.eye(self.d))
        B = self.model.Q.evaluate(t) - N @ self.evolve(t, self.T).T @ inv
        beta = N @ linalg.lu_solve(lu, self.m_minus(self.b, t, self.T),
                                   trans=1) + self.model.r.evaluate(t)[:, 0]
        return B, beta

    def with_endpoints(self, a, b):
        """
        A kernel for the same model and horizon with other endpoints, sharing
        the frozen evolution operator.
        """
        return type(self)(self.model, self.T, a, b, evolution=self.evolution,
                          quad_rtol=self.quadrature.rtol,
                          quad_atol=self.quadrature.atol,
                          horizon_eps=self.horizon_eps,
                          probe_points=1)
