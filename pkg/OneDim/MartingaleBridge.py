"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from OneDim.ScalarModel import gamma_1d
from Utilities.BridgeErrors import DomainError

import numpy as np

"""
Without forcing, M_t = exp(-qbar(t)) Z_t is a martingale with quadratic
variation <M>_t = exp(-2 qbar(t)) gamma(0, t). Its bridge has anticipative
and integral forms whose coefficients, scaled by exp(qbar(t)), are those of
the bridge of Z.
"""


def martingale_bridge_forms(m, a, b, T, t):
    """
    Coefficients of the martingale bridge at time 0 <= t < T.

    :param m: a ScalarModel with r = 0
    :return: dictionary with
             M_qv                 <M>_t
             anticipative_coeffs  coef_a, coef_b, coef_Zt, coef_ZT
             integral_coeffs      coef_a, coef_b
             integral_kernel      kernel(s), the integrand against dB_s
                                  on [0, t]
    """
    if m.has_forcing():
        raise DomainError('Martingale forms need r = 0')
    if not 0 <= t < T:
        raise ValueError('Martingale forms need 0 <= t < T')

    qt, qT = m.qbar(t), m.qbar(T)
    g_0t = gamma_1d(m, 0.0, t)
    g_0T = gamma_1d(m, 0.0, T)
    g_tT = gamma_1d(m, t, T)

    coef_a = 1.0 - np.exp(2.0 * (qT - qt)) * g_0t / g_0T
    coef_b = np.exp(qT - 2.0 * qt) * g_0t / g_0T

    def kernel(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        g_sT = np.array([gamma_1d(m, u, T) for u in s])
        return g_tT / g_sT * np.exp(-m.qbar_many(s)) * \
            m.sigma.evaluate_many(s)[:, 0, 0]

    return {'M_qv': float(np.exp(-2.0 * qt) * g_0t),
            'anticipative_coeffs': {'coef_a': float(coef_a),
                                    'coef_b': float(coef_b),
                                    'coef_Zt': float(np.exp(-qt)),
                                    'coef_ZT': -float(coef_b)},
            'integral_coeffs': {'coef_a': float(coef_a),
                                'coef_b': float(coef_b)},
            'integral_kernel': kernel}
