"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Utilities.BridgeErrors import SchemaError, KnotError, \
    DifferentiationError

from scipy.integrate import cumulative_trapezoid
from scipy.special import comb

import numpy as np

"""
A CoefficientFunction is a matrix valued function of time, used for the
coefficients Q(t), r(t) and S(t) of a linear SDE. Three families are supported:

    constant    A(t) = A
    polynomial  A(t) = A_0 + A_1 t + ... + A_m t^m
    table       piecewise linear interpolation between knots, constant outside
                the knot range
"""

KINDS = ('constant', 'polynomial', 'table')

# Refinement factor of the knot grid used to integrate tables
TABLE_REFINEMENT = 8


def _as_matrix(value, what):
    try:
        matrix = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError('%s is not a numeric matrix: %s' % (what, value))

    if matrix.ndim != 2:
        raise SchemaError('%s must be a list of rows, got %d dimensions'
                          % (what, matrix.ndim))

    if not np.all(np.isfinite(matrix)):
        raise SchemaError('%s contains non-finite entries' % what)

    return matrix


class CoefficientFunction:
    def __init__(self, kind, matrices, knots=None):
        """
        Initialize and validate a coefficient function.

        :param kind: one of 'constant', 'polynomial', 'table'
        :param matrices: the matrix (constant), the coefficient matrices
                         A_0..A_m (polynomial) or one matrix per knot (table)
        :param knots: the table knots (tables only)
        """

        if kind not in KINDS:
            raise SchemaError('Unknown coefficient kind: %s' % kind)

        self.kind = kind

        if kind == 'constant':
            matrices = [matrices]

        if not isinstance(matrices, (list, tuple, np.ndarray)) or \
                len(matrices) == 0:
            raise SchemaError('Coefficient of kind %s needs at least one '
                              'matrix' % kind)

        mats = [_as_matrix(m, '%s matrix %d' % (kind, i))
                for i, m in enumerate(matrices)]

        self.shape = mats[0].shape
        for i, m in enumerate(mats):
            if m.shape != self.shape:
                raise SchemaError('%s matrix %d has shape %s, expected %s'
                                  % (kind, i, m.shape, self.shape))

        self.coeffs = None
        self.knots = None
        self.values = None
        self._cumulative = None

        if kind == 'table':
            if knots is None:
                raise SchemaError('Table coefficient without knots')

            knots = np.array(knots, dtype=float).ravel()
            if len(knots) < 2:
                raise KnotError('Table coefficient needs at least 2 knots, '
                                'got %d' % len(knots))
            if len(knots) != len(mats):
                raise SchemaError('Table has %d knots but %d values'
                                  % (len(knots), len(mats)))
            if np.any(np.diff(knots) <= 0):
                raise KnotError('Table knots must be strictly increasing: %s'
                                % knots.tolist())
            if knots[0] < 0:
                raise KnotError('Table knots must be non-negative')

            self.knots = knots
            self.values = np.stack(mats)
            self.knots.setflags(write=False)
            self.values.setflags(write=False)
            self._build_cumulative()

        else:
            self.coeffs = np.stack(mats)
            self.coeffs.setflags(write=False)

    @classmethod
    def constant(cls, matrix):
        return cls('constant', matrix)

    @classmethod
    def polynomial(cls, coeffs):
        return cls('polynomial', list(coeffs))

    @classmethod
    def table(cls, knots, values):
        return cls('table', list(values), knots=knots)

    def __eq__(self, other):
        if not isinstance(other, CoefficientFunction):
            return NotImplemented

        if self.kind != other.kind or self.shape != other.shape:
            return False

        if self.kind == 'table':
            return np.array_equal(self.knots, other.knots) and \
                np.array_equal(self.values, other.values)

        return np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return 'CoefficientFunction(%s, shape=%s)' % (self.kind, self.shape)

    @property
    def degree(self):
        """
        Polynomial degree (0 for constants, None for tables).
        """
        if self.kind == 'table':
            return None
        return len(self.coeffs) - 1

    def evaluate(self, t):
        """
        Evaluate the coefficient at time t.

        :param t: the time
        :return: a matrix of the declared shape
        """
        return self.evaluate_many(np.array([float(t)]))[0]

    def evaluate_many(self, ts):
        """
        Evaluate the coefficient at several times at once.

        :param ts: 1-d array of times
        :return: array of shape (len(ts), rows, cols)
        """
        ts = np.asarray(ts, dtype=float).ravel()

        if self.kind == 'table':
            rows, cols = self.shape
            out = np.empty((len(ts), rows, cols))
            for i in range(rows):
                for j in range(cols):
                    # np.interp clamps outside the knot range
                    out[:, i, j] = np.interp(ts, self.knots,
                                             self.values[:, i, j])
            return out

        # Horner scheme over the coefficient matrices
        out = np.broadcast_to(self.coeffs[-1], (len(ts),) + self.shape).copy()
        for k in range(len(self.coeffs) - 2, -1, -1):
            out = out * ts[:, None, None] + self.coeffs[k]
        return out

    def derivative(self, t, order=1, step=1e-3):
        """
        The order-th derivative at time t. Exact for constants and polynomials,
        central finite differences for tables.

        :param t: the time
        :param order: derivative order (0 returns the value)
        :param step: finite difference step (tables only)
        :return: a matrix of the declared shape
        """
        if order < 0:
            raise ValueError('Negative derivative order %d' % order)

        if order == 0:
            return self.evaluate(t)

        if self.kind == 'table':
            half_width = 0.5 * order * step
            if t - half_width < self.knots[0] or \
                    t + half_width > self.knots[-1]:
                raise DifferentiationError(
                    'Finite difference stencil [%g, %g] leaves the knot range '
                    '[%g, %g]' % (t - half_width, t + half_width,
                                  self.knots[0], self.knots[-1]))

            nodes = t + (0.5 * order - np.arange(order + 1)) * step
            weights = np.array([(-1) ** j * comb(order, j)
                                for j in range(order + 1)])
            vals = self.evaluate_many(nodes)
            return np.tensordot(weights, vals, axes=1) / step ** order

        if order > self.degree:
            return np.zeros(self.shape)

        out = np.zeros(self.shape)
        for k in range(order, len(self.coeffs)):
            factor = np.prod(np.arange(k - order + 1, k + 1))
            out += factor * self.coeffs[k] * t ** (k - order)
        return out

    def _build_cumulative(self):
        grid = self.knots
        if grid[0] > 0:
            grid = np.concatenate([[0.0], grid])

        refined = [np.linspace(grid[i], grid[i + 1], TABLE_REFINEMENT + 1)[:-1]
                   for i in range(len(grid) - 1)]
        refined = np.concatenate(refined + [[grid[-1]]])

        vals = self.evaluate_many(refined)
        self._refined = refined
        self._refined_values = vals
        self._cumulative = cumulative_trapezoid(vals, refined, axis=0,
                                                initial=0)

    def antiderivative(self, t):
        """
        The integral of the coefficient over [0, t].

        :param t: the upper limit (t >= 0)
        :return: a matrix of the declared shape
        """
        t = float(t)

        if self.kind != 'table':
            out = np.zeros(self.shape)
            for k, coeff in enumerate(self.coeffs):
                out += coeff * t ** (k + 1) / (k + 1)
            return out

        grid = self._refined
        if t >= grid[-1]:
            return self._cumulative[-1] + \
                self._refined_values[-1] * (t - grid[-1])

        i = int(np.searchsorted(grid, t, side='right')) - 1
        i = max(i, 0)
        # Exact on the linear segment
        partial = 0.5 * (t - grid[i]) * (self._refined_values[i] +
                                         self.evaluate(t))
        return self._cumulative[i] + partial

    def antiderivative_many(self, ts):
        """
        Vectorized antiderivative, array of shape (len(ts), rows, cols).
        """
        ts = np.asarray(ts, dtype=float).ravel()

        if self.kind == 'table':
            return np.array([self.antiderivative(t) for t in ts]).reshape(
                (len(ts),) + self.shape)

        out = np.zeros((len(ts),) + self.shape)
        for k, coeff in enumerate(self.coeffs):
            out += coeff * (ts ** (k + 1) / (k + 1))[:, None, None]
        return out

    def is_time_invariant(self):
        """
        Check whether the coefficient does not depend on time.

        :return: True or False
        """
        if self.kind == 'constant':
            return True

        if self.kind == 'polynomial':
            return not np.any(self.coeffs[1:])

        return bool(np.all(self.values == self.values[0]))

    def max_norm(self, t0, t1, samples=64):
        """
        Estimate max ||A(u)|| (spectral norm) over [t0, t1] on a sample grid.
        """
        us = np.linspace(min(t0, t1), max(t0, t1), samples)
        if self.kind == 'table':
            inside = self.knots[(self.knots > us[0]) & (self.knots < us[-1])]
            us = np.concatenate([us, inside])
        return float(max(np.linalg.norm(m, 2)
                         for m in self.evaluate_many(us)))

    def to_dict(self):
        """
        The model-file representation of this coefficient.

        :return: a dictionary
        """
        if self.kind == 'constant':
            return {'kind': 'constant', 'rows': self.coeffs[0].tolist()}

        if self.kind == 'polynomial':
            return {'kind': 'polynomial',
                    'coeffs': [c.tolist() for c in self.coeffs]}

        return {'kind': 'table',
                'knots': self.knots.tolist(),
                'values': [v.tolist() for v in self.values]}


def eval_coeff(f, t):
    """
    Evaluate a coefficient function at time t >= 0.

    :param f: a CoefficientFunction
    :param t: the time
    :return: the matrix f(t)
    """
    if t < 0:
        raise ValueError('Coefficients are defined for t >= 0, got %g' % t)

    return f.evaluate(t)
