"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Utilities.BridgeErrors import DomainError

import numpy as np

"""
Closed forms of the Ornstein-Uhlenbeck bridge dZ = q Z dt + sigma dB from a
to b on [0, T] (q != 0), and of the scaled Wiener bridge (q = 0). All OU
formulas are even in q.
"""


def _check_common(sigma, T):
    if sigma == 0:
        raise DomainError('sigma must be nonzero')
    if T <= 0:
        raise DomainError('Unacceptable value for T: %s ' % T)


class OUBridge:
    def __init__(self, q, sigma, a, b, T):
        if q == 0:
            raise DomainError('OU bridge needs q != 0, use the Wiener bridge')
        _check_common(sigma, T)

        self.q = float(q)
        self.sigma = float(sigma)
        self.a = float(a)
        self.b = float(b)
        self.T = float(T)

    def _sh(self, x):
        return np.sinh(self.q * x)

    def mean(self, t):
        """
        E[U_t] = a sinh(q(T-t)) / sinh(qT) + b sinh(qt) / sinh(qT).
        """
        return (self.a * self._sh(self.T - t) + self.b * self._sh(t)) / \
            self._sh(self.T)

    def var(self, s, t):
        """
        Variance of U_t given U_s, for s <= t <= T.
        """
        return self.sigma ** 2 / self.q * self._sh(self.T - t) * \
            self._sh(t - s) / self._sh(self.T - s)

    def sde_drift(self, t, u):
        """
        Drift of the bridge SDE at time t < T and state u.
        """
        x = self.T - t
        return self.q * (-u / np.tanh(self.q * x) + self.b / self._sh(x))

    def integral_coeff(self, s, t):
        """
        Integrand of the integral representation, sigma sinh(q(T-t)) / sinh(q(T-s)).
        """
        return self.sigma * self._sh(self.T - t) / self._sh(self.T - s)

    def anticipative_coeffs(self, t):
        coef_b = self._sh(t) / self._sh(self.T)
        return {'coef_a': self._sh(self.T - t) / self._sh(self.T),
                'coef_b': coef_b, 'coef_Zt': 1.0, 'coef_ZT': -coef_b}


class WienerBridge:
    def __init__(self, sigma, a, b, T):
        _check_common(sigma, T)

        self.q = 0.0
        self.sigma = float(sigma)
        self.a = float(a)
        self.b = float(b)
        self.T = float(T)

    def mean(self, t):
        return self.a * (self.T - t) / self.T + self.b * t / self.T

    def var(self, s, t):
        return self.sigma ** 2 * (self.T - t) * (t - s) / (self.T - s)

    def sde_drift(self, t, u):
        return (self.b - u) / (self.T - t)

    def integral_coeff(self, s, t):
        return self.sigma * (self.T - t) / (self.T - s)

    def anticipative_coeffs(self, t):
        return {'coef_a': (self.T - t) / self.T, 'coef_b': t / self.T,
                'coef_Zt': 1.0, 'coef_ZT': -t / self.T}


def ou_bridge(q, sigma, a, b, T):
    """
    The OU bridge closed forms; q = 0 raises DomainError.
    """
    return OUBridge(q, sigma, a, b, T)


def wiener_bridge(sigma, a, b, T):
    return WienerBridge(sigma, a, b, T)
