"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Utilities.BridgeErrors import QuadError

from scipy.special import roots_legendre

import numpy as np

"""
Adaptive panel Gauss-Legendre quadrature for smooth matrix valued integrands.

The integrand takes a 1-d array of n nodes and returns an array of shape
(n, rows, cols). A panel is accepted when its estimate agrees with the sum of
the estimates on its two halves.
"""

DEFAULT_ORDER = 10
DEFAULT_MAX_DEPTH = 40


class GaussLegendre:
    def __init__(self, order=DEFAULT_ORDER, rtol=1e-10, atol=1e-14,
                 max_depth=DEFAULT_MAX_DEPTH):
        """
        :param order: number of nodes per panel
        :param rtol: relative tolerance per panel
        :param atol: absolute tolerance per panel
        :param max_depth: maximum bisection depth
        """

        if order < 2:
            raise ValueError('Unacceptable quadrature order: %s ' % order)

        self.order = order
        self.rtol = rtol
        self.atol = atol
        self.max_depth = max_depth

        x, w = roots_legendre(order)
        self._x = x
        self._w = w

    def _panels(self, lo, hi):
        """
        Node and weight arrays of the panels [lo_i, hi_i] stacked together.
        """
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = mid[:, None] + half[:, None] * self._x[None, :]
        weights = half[:, None] * self._w[None, :]
        return nodes, weights

    def _estimate(self, f, lo, hi):
        nodes, weights = self._panels(lo, hi)
        vals = f(nodes.ravel())
        vals = vals.reshape(nodes.shape + vals.shape[1:])
        return np.einsum('pn,pn...->p...', weights, vals)

    def integrate(self, f, a, b):
        """
        Integral of f over [a, b]. Panels are processed breadth first so
        that the integrand is evaluated on many nodes per call.

        :param f: vectorized integrand
        :param a: lower limit
        :param b: upper limit
        :return: the integral, an array of shape (rows, cols)
        """

        if a == b:
            probe = f(np.array([a]))
            return np.zeros(probe.shape[1:])

        sign = 1.0
        if b < a:
            a, b = b, a
            sign = -1.0

        total = None
        lo = np.array([a])
        hi = np.array([b])
        whole = self._estimate(f, lo, hi)

        for depth in range(self.max_depth + 1):
            mid = 0.5 * (lo + hi)
            halves = self._estimate(f, np.concatenate([lo, mid]),
                                    np.concatenate([mid, hi]))
            n = len(lo)
            refined = halves[:n] + halves[n:]

            err = np.abs(refined - whole).reshape(n, -1).max(axis=1)
            scale = np.abs(refined).reshape(n, -1).max(axis=1)
            done = err <= np.maximum(self.atol, self.rtol * scale)

            accepted = refined[done].sum(axis=0)
            total = accepted if total is None else total + accepted

            if done.all():
                return sign * total

            keep = ~done
            lo = np.concatenate([lo[keep], mid[keep]])
            hi = np.concatenate([mid[keep], hi[keep]])
            whole = np.concatenate([halves[:n][keep], halves[n:][keep]])

        raise QuadError('Quadrature on [%g, %g] did not reach rtol=%g after '
                        '%d bisections' % (a, b, self.rtol, self.max_depth))
