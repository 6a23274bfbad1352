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

import numpy as np

"""
The exact law of (Z_t1, ..., Z_tn) given Z_T = b for the process started at
Z_0 = a, by Gaussian conditioning of the joint law of (Z_t1, ..., Z_tn, Z_T).
"""


def validate_times(times, T):
    times = np.asarray(times, dtype=float).ravel()
    if len(times) and (times[0] <= 0 or times[-1] >= T):
        raise ValueError('Conditioning times must lie in (0, T)')
    if np.any(np.diff(times) <= 0):
        raise ValueError('Conditioning times must be strictly increasing')
    return times


def joint_law_z(kernel, times):
    """
    The joint law of Z at the given times, with Z_0 = a.
    Cov(Z_s, Z_t) = (E(t,0) Gamma(0,s))^T for s <= t.

    :param kernel: a BridgeKernel
    :param times: increasing times in (0, T]
    :return: a GaussLaw on R^{n d}
    """
    d = kernel.d
    n = len(times)

    mean = np.concatenate([kernel.mean_forward(kernel.a, 0.0, t)
                           for t in times]) if n else np.zeros(0)
    cov = np.zeros((n * d, n * d))
    for i in range(n):
        for j in range(i, n):
            block = kernel.cov_z(times[i], times[j])
            cov[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
            cov[j * d:(j + 1) * d, i * d:(i + 1) * d] = block.T

    return GaussLaw(mean, cov)


def conditional_fdd(kernel, times):
    """
    The conditional law of (Z_t1, ..., Z_tn) given Z_T = b.

    :param kernel: a BridgeKernel
    :param times: strictly increasing times in (0, T), possibly empty
    :return: a GaussLaw on R^{n d}
    """
    times = validate_times(times, kernel.T)
    d = kernel.d
    n = len(times)

    joint = joint_law_z(kernel, np.concatenate([times, [kernel.T]]))
    observed = np.arange(n * d, (n + 1) * d)
    return joint.condition(observed, kernel.b)
