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
Numerical residuals of the algebraic identities between the bridge kernels.
Every residual is relative: ||lhs - rhs||_F / max(1, ||rhs||_F).
"""


def relative_residual(lhs, rhs):
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs)))


def identity_residuals(kernel, s, t):
    """
    Residuals of the kernel identities at 0 <= s < t < T.

    I1   Sigma(s,t)^-1 = kappa(s,t)^-1 + E(T,t)^T kappa(t,T)^-1 E(T,t)
    I2a  kappa(t,T)^-1 - kappa(s,T)^-1 = Gamma(s,T)^-1 Gamma(s,t) (Gamma(t,T)^T)^-1
    I2b  Sigma(s,t) = Gamma(t,T) [int_s^t Gamma(u,T)^-1 S S^T (Gamma(u,T)^T)^-1 du] Gamma(t,T)^T
    I2c  E(t,0) - Gamma(0,t)^T (Gamma(0,T)^T)^-1 E(T,0) = Gamma(t,T) Gamma(0,T)^-1
    I2d  Gamma(s,T)^T E(t,s)^T - E(T,s) Gamma(s,t) = Gamma(t,T)^T
    I3   int_t^T E(0,u) S S^T E(0,u)^T du = E(0,T) kappa(t,T) E(0,T)^T
    I4   Gamma(s,T) Gamma(0,T)^-1 E(0,u) + Gamma(0,s)^T (Gamma(0,T)^T)^-1 E(T,u) = E(s,u), at u = t
    kappa_additivity  kappa(s,t) = E(t,u) kappa(s,u) E(t,u)^T + kappa(u,t), u = (s+t)/2
    gamma_forms  E(s,t) kappa(s,t) = int_s^t E(s,u) S S^T E(t,u)^T du

    :param kernel: a BridgeKernel
    :param s: first time
    :param t: second time
    :return: dictionary of residuals
    """

    T = kernel.T
    if not 0 <= s < t < T:
        raise ValueError('Identities need 0 <= s < t < T, got s=%g t=%g T=%g'
                         % (s, t, T))

    inv = np.linalg.inv
    E = kernel.evolve

    k_st = kernel.kappa(s, t)
    k_sT = kernel.kappa(s, T)
    k_tT = kernel.kappa(t, T)

    G_st = kernel.gamma(s, t)
    G_sT = kernel.gamma(s, T)
    G_tT = kernel.gamma(t, T)
    G_0s = kernel.gamma(0.0, s)
    G_0t = kernel.gamma(0.0, t)
    G_0T = kernel.gamma(0.0, T)

    Sigma = kernel.sigma_bridge(s, t)
    E_Tt = E(t, T)

    residuals = {}

    residuals['I1'] = relative_residual(
        inv(Sigma), inv(k_st) + E_Tt.T @ inv(k_tT) @ E_Tt)

    residuals['I2a'] = relative_residual(
        inv(k_tT) - inv(k_sT), inv(G_sT) @ G_st @ inv(G_tT.T))

    residuals['I2b'] = relative_residual(
        Sigma, G_tT @ kernel.bridge_noise_gramian(s, t) @ G_tT.T)

    residuals['I2c'] = relative_residual(
        E(0.0, t) - G_0t.T @ inv(G_0T.T) @ E(0.0, T), G_tT @ inv(G_0T))

    residuals['I2d'] = relative_residual(
        G_sT.T @ E(s, t).T - E(s, T) @ G_st, G_tT.T)

    def m_integrand(us):
        Es = kernel.evolution.evolve_from_many(0.0, us)
        return Es @ kernel.model.noise_many(us) @ Es.transpose(0, 2, 1)

    E_0T = E(T, 0.0)
    residuals['I3'] = relative_residual(
        kernel.integrate(m_integrand, t, T), E_0T @ k_tT @ E_0T.T)

    u = t
    residuals['I4'] = relative_residual(
        G_sT @ inv(G_0T) @ E(u, 0.0) + G_0s.T @ inv(G_0T.T) @ E(u, T),
        E(u, s))

    mid = 0.5 * (s + t)
    E_tm = E(mid, t)
    residuals['kappa_additivity'] = relative_residual(
        k_st, E_tm @ kernel.kappa(s, mid) @ E_tm.T + kernel.kappa(mid, t))

    residuals['gamma_forms'] = relative_residual(
        G_st, kernel.gamma_direct(s, t))

    return residuals
