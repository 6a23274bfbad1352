"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Kernels.Quadrature import GaussLegendre
from Model.CoefficientFunction import CoefficientFunction
from Model.LinearModel import LinearModel
from Utilities.BridgeErrors import DomainError

import numpy as np

"""
Closed forms of the one dimensional linear process

    dZ_t = (q(t) Z_t + r(t)) dt + sigma(t) dB_t

in terms of qbar(t) = int_0^t q and the variance kernel

    gamma(s, t) = int_s^t exp(2 (qbar(t) - qbar(u))) sigma(u)^2 du.
"""


def _scalar_coefficient(value, name):
    if isinstance(value, CoefficientFunction):
        if value.shape != (1, 1):
            raise DomainError('Coefficient %s must be 1 x 1, got %s'
                              % (name, value.shape))
        return value
    return CoefficientFunction.constant([[float(value)]])


class ScalarModel:
    def __init__(self, q, r, sigma, probe_horizon=1.0, probe_points=65):
        """
        :param q: drift coefficient (number or 1 x 1 CoefficientFunction)
        :param r: forcing term (number or 1 x 1 CoefficientFunction)
        :param sigma: diffusion coefficient, nonzero on the probe grid
        :param probe_horizon: end of the probe grid of sigma
        :param probe_points: points of the probe grid
        """

        self.q = _scalar_coefficient(q, 'q')
        self.r = _scalar_coefficient(r, 'r')
        self.sigma = _scalar_coefficient(sigma, 'sigma')
        self.quadrature = GaussLegendre(rtol=1e-12, atol=1e-15)

        probe = np.linspace(0.0, probe_horizon, probe_points)
        if self.sigma.kind == 'table':
            probe = np.concatenate([probe, self.sigma.knots])
        if np.any(self.sigma.evaluate_many(probe)[:, 0, 0] == 0):
            raise DomainError('sigma vanishes on the probe grid')

    @classmethod
    def from_linear_model(cls, model, probe_horizon=1.0):
        if model.d != 1 or model.p != 1:
            raise DomainError('Scalar model needs d = p = 1, got d=%d p=%d'
                              % (model.d, model.p))
        return cls(model.Q, model.r, model.S, probe_horizon=probe_horizon)

    def to_linear_model(self):
        return LinearModel(1, 1, self.q, self.r, self.sigma)

    def is_constant(self):
        return self.q.is_time_invariant() and \
            self.sigma.is_time_invariant() and self.r.is_time_invariant()

    def has_forcing(self):
        return self.to_linear_model().has_drift_offset()

    def qbar(self, t):
        """
        qbar(t) = int_0^t q(u) du.
        """
        return float(self.q.antiderivative(t)[0, 0])

    def qbar_many(self, ts):
        return self.q.antiderivative_many(ts)[:, 0, 0]

    def integrate(self, f, s, t):
        """
        Quadrature of a vectorized scalar integrand over [s, t], split at
        the table knots.
        """
        if s == t:
            return 0.0

        points = set()
        for coeff in (self.q, self.r, self.sigma):
            if coeff.kind == 'table':
                points.update(k for k in coeff.knots if s < k < t)
        points = [s] + sorted(points) + [t]

        def matrix_f(us):
            return np.asarray(f(us), dtype=float)[:, None, None]

        return float(sum(self.quadrature.integrate(matrix_f, u0, u1)[0, 0]
                         for u0, u1 in zip(points[:-1], points[1:])))


def gamma_1d(m, s, t):
    """
    The variance kernel gamma(s, t), the variance of Z_t given Z_s.
    """
    if not 0 <= s <= t:
        raise ValueError('gamma_1d needs 0 <= s <= t, got s=%g t=%g'
                         % (s, t))

    qt = m.qbar(t)

    def integrand(us):
        return np.exp(2.0 * (qt - m.qbar_many(us))) * \
            m.sigma.evaluate_many(us)[:, 0, 0] ** 2

    return m.integrate(integrand, s, t)


def forcing_integral(m, anchor, s, t):
    """
    int_s^t exp(qbar(anchor) - qbar(u)) r(u) du.
    """
    if not m.has_forcing():
        return 0.0

    qa = m.qbar(anchor)

    def integrand(us):
        return np.exp(qa - m.qbar_many(us)) * m.r.evaluate_many(us)[:, 0, 0]

    return m.integrate(integrand, s, t)


def m_1d(m, x, s, t):
    """
    The mean of Z_t given Z_s = x.
    """
    return np.exp(m.qbar(t) - m.qbar(s)) * x + forcing_integral(m, t, s, t)


def n_ab_1d(m, a, b, s, t, T):
    """
    The bridge mean n_{a,b}(s, t) for 0 <= s <= t < T.
    """
    if not 0 <= s <= t < T:
        raise ValueError('n_ab_1d needs 0 <= s <= t < T')

    g_sT = gamma_1d(m, s, T)
    pulled_back = b - forcing_integral(m, T, t, T)
    return gamma_1d(m, s, t) / g_sT * np.exp(m.qbar(T) - m.qbar(t)) * \
        pulled_back + gamma_1d(m, t, T) / g_sT * m_1d(m, a, s, t)


def sigma_1d(m, s, t, T):
    """
    The bridge variance sigma(s, t) for 0 <= s <= t < T.
    """
    if not 0 <= s <= t < T:
        raise ValueError('sigma_1d needs 0 <= s <= t < T')

    return gamma_1d(m, s, t) * gamma_1d(m, t, T) / gamma_1d(m, s, T)


def integral_1d_coeffs(m, a, b, T, t):
    """
    Coefficients of the integral representation
    U_t = coef_a a + coef_b b + offset + int_0^t kernel(s) dB_s, t < T.

    :return: dictionary with coef_a, coef_b, offset and kernel (a callable)
    """
    g_0T = gamma_1d(m, 0.0, T)
    g_tT = gamma_1d(m, t, T)
    g_0t = gamma_1d(m, 0.0, t)
    qt, qT = m.qbar(t), m.qbar(T)

    coef_a = np.exp(qt) * g_tT / g_0T
    coef_b = np.exp(qT - qt) * g_0t / g_0T
    offset = n_ab_1d(m, 0.0, 0.0, 0.0, t, T) if m.has_forcing() else 0.0

    def kernel(s):
        s = np.asarray(s, dtype=float)
        g_sT = np.array([gamma_1d(m, u, T) for u in np.atleast_1d(s)])
        return (g_tT / g_sT * np.exp(qt - m.qbar_many(np.atleast_1d(s))) *
                m.sigma.evaluate_many(np.atleast_1d(s))[:, 0, 0]).reshape(
                    np.shape(s))

    return {'coef_a': coef_a, 'coef_b': coef_b, 'offset': offset,
            'kernel': kernel}


def anticipative_1d_forms(m, a, b, T, t):
    """
    Coefficients of Y_t = coef_a a + coef_b b + coef_Zt Z_t + coef_ZT Z_T,
    Z started at 0, in each available form:

        gamma       through gamma(0, t) and gamma(0, T)
        covariance  through the covariance function R of Z
        rtilde      through Rtilde(s, t) = gamma(s, t) exp(qbar(s) - qbar(t))
        sinh        hyperbolic form, constant q != 0, sigma and r = 0 only

    :return: dictionary form name -> coefficient dictionary
    """
    if not 0 <= t <= T:
        raise ValueError('anticipative coefficients need 0 <= t <= T')

    qt, qT = m.qbar(t), m.qbar(T)
    g_0t = gamma_1d(m, 0.0, t)
    g_0T = gamma_1d(m, 0.0, T)

    def coefficients(coef_a, coef_b):
        return {'coef_a': float(coef_a), 'coef_b': float(coef_b),
                'coef_Zt': 1.0, 'coef_ZT': -float(coef_b)}

    forms = {}

    ratio = g_0t / g_0T
    forms['gamma'] = coefficients(np.exp(qt) - np.exp(2 * qT - qt) * ratio,
                                  np.exp(qT - qt) * ratio)

    # R(s, t) = Cov(Z_s, Z_t) = exp(qbar(t) - qbar(s)) gamma(0, s), s <= t
    R_tT = np.exp(qT - qt) * g_0t
    R_TT = g_0T
    forms['covariance'] = coefficients(np.exp(qt) - np.exp(qT) * R_tT / R_TT,
                                       R_tT / R_TT)

    # Rtilde(s, t) = exp(qbar(s) - qbar(t)) R(t, t) - exp(qbar(t) - qbar(s)) R(s, s)
    R_tt = g_0t

    def rtilde(qs, R_ss, qu, R_uu):
        return np.exp(qs - qu) * R_uu - np.exp(qu - qs) * R_ss

    q0 = m.qbar(0.0)
    Rt_tT = rtilde(qt, R_tt, qT, R_TT)
    Rt_0T = rtilde(q0, 0.0, qT, R_TT)
    Rt_0t = rtilde(q0, 0.0, qt, R_tt)
    forms['rtilde'] = coefficients(Rt_tT / Rt_0T, Rt_0t / Rt_0T)

    if m.is_constant() and not m.has_forcing():
        q = float(m.q.evaluate(0.0)[0, 0])
        if q != 0:
            forms['sinh'] = coefficients(np.sinh(q * (T - t)) / np.sinh(q * T),
                                         np.sinh(q * t) / np.sinh(q * T))

    return forms


def anticipative_1d_coeffs(m, a, b, T, t):
    """
    Coefficients of the anticipative representation at time t (gamma form).
    """
    return anticipative_1d_forms(m, a, b, T, t)['gamma']
