"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.GaussLaw import GaussLaw
from Utilities.BridgeErrors import DensityMismatch

import logging
import numpy as np

"""
Transition densities of the linear process Z and of its bridge U. All values
are computed in log space; each function returns (value, log value).
"""

logger = logging.getLogger(__name__)

RATIO_LOG_RTOL = 1e-8


def transition_law_z(kernel, x, s, t):
    """
    The law of Z_t given Z_s = x, N(m_x(s,t), kappa(s,t)).
    """
    return GaussLaw(kernel.mean_forward(x, s, t), kernel.kappa(s, t))


def transition_law_bridge(kernel, x, s, t):
    """
    The law of U_t given U_s = x, N(n_{x,b}(s,t), Sigma(s,t)).
    """
    A, c, Sigma = kernel.bridge_transition(s, t)
    return GaussLaw(A @ np.asarray(x, dtype=float) + c, Sigma)


def transition_density_z(kernel, x, y, s, t):
    """
    p_{s,t}(x, y) of the linear process.

    :return: (density, log density)
    """
    if not t > s:
        raise ValueError('Transition densities need s < t, got s=%g t=%g'
                         % (s, t))

    log_value = transition_law_z(kernel, x, s, t).logpdf(y)
    return float(np.exp(log_value)), log_value


def bridge_density_ratio(kernel, x, y, s, t):
    """
    The bridge density as the ratio p_{s,t}(x,y) p_{t,T}(y,b) / p_{s,T}(x,b).

    :return: (density, log density)
    """
    log_value = transition_density_z(kernel, x, y, s, t)[1] + \
        transition_density_z(kernel, y, kernel.b, t, kernel.T)[1] - \
        transition_density_z(kernel, x, kernel.b, s, kernel.T)[1]
    return float(np.exp(log_value)), log_value


def transition_density_bridge(kernel, x, y, s, t, check=True):
    """
    The bridge transition density of U_t = y given U_s = x, 0 <= s < t < T.
    With check the ratio route is evaluated as well and a relative gap in
    log space above RATIO_LOG_RTOL raises DensityMismatch.

    :return: (density, log density)
    """
    if not t > s:
        raise ValueError('Transition densities need s < t, got s=%g t=%g'
                         % (s, t))

    log_value = transition_law_bridge(kernel, x, s, t).logpdf(y)

    if check:
        log_ratio = bridge_density_ratio(kernel, x, y, s, t)[1]
        gap = abs(log_value - log_ratio) / max(1.0, abs(log_ratio))
        if gap > RATIO_LOG_RTOL:
            raise DensityMismatch('Bridge density routes disagree at '
                                  's=%g t=%g: %.17g vs %.17g'
                                  % (s, t, log_value, log_ratio))
        logger.debug('Bridge density routes agree to %g at s=%g t=%g', gap,
                     s, t)

    return float(np.exp(log_value)), log_value


def h_function(kernel, t, x):
    """
    The space-time harmonic function h(t, x) = p_{t,T}(x, b).
    """
    return transition_density_z(kernel, x, kernel.b, t, kernel.T)[0]
