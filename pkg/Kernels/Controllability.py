"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Utilities.BridgeErrors import DifferentiationError

import logging
import numpy as np

"""
Sufficient conditions for positive definiteness of kappa: the controllability
matrix [S, DS, ..., D^k S] at t0, with D S = S' - Q S, has full rank d.

Constant and polynomial coefficients are differentiated exactly through a
small matrix polynomial algebra. When Q or S is a table the operator D is
applied with central finite differences, which is only meaningful while the
stencil stays inside the knot range and for moderate k.
"""

logger = logging.getLogger(__name__)

FD_STEP = 1e-3
RANK_RTOL = 1e-9


def _poly_derivative(P):
    if len(P) == 1:
        return np.zeros_like(P)
    k = np.arange(1, len(P))[:, None, None]
    return P[1:] * k


def _poly_product(A, B):
    out = np.zeros((len(A) + len(B) - 1, A.shape[1], B.shape[2]))
    for i in range(len(A)):
        for j in range(len(B)):
            out[i + j] += A[i] @ B[j]
    return out


def _poly_sub(A, B):
    n = max(len(A), len(B))
    out = np.zeros((n,) + A.shape[1:])
    out[:len(A)] += A
    out[:len(B)] -= B
    return out


def _poly_eval(P, t):
    out = np.zeros(P.shape[1:])
    for k in range(len(P) - 1, -1, -1):
        out = out * t + P[k]
    return out


def _blocks_polynomial(model, t0, k_max):
    Q = model.Q.coeffs
    D = np.array(model.S.coeffs)
    blocks = [_poly_eval(D, t0)]
    for _ in range(k_max):
        D = _poly_sub(_poly_derivative(D), _poly_product(Q, D))
        blocks.append(_poly_eval(D, t0))
    return blocks


def _blocks_finite_difference(model, t0, k_max, step):
    for name in ('Q', 'S'):
        coeff = getattr(model, name)
        if coeff.kind != 'table':
            continue
        lo, hi = t0 - k_max * step, t0 + k_max * step
        if lo < coeff.knots[0] or hi > coeff.knots[-1]:
            raise DifferentiationError(
                'Stencil [%g, %g] for %d differences of %s leaves the knot '
                'range [%g, %g]' % (lo, hi, k_max, name, coeff.knots[0],
                                    coeff.knots[-1]))

    def apply(k, t):
        # D^k S at t
        if k == 0:
            return model.S.evaluate(t)
        prev = apply(k - 1, t)
        slope = (apply(k - 1, t + step) - apply(k - 1, t - step)) / \
            (2.0 * step)
        return slope - model.Q.evaluate(t) @ prev

    return [apply(k, t0) for k in range(k_max + 1)]


def _rank(matrix):
    sv = np.linalg.svd(matrix, compute_uv=False)
    if len(sv) == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_RTOL * sv[0]))


def controllability_check(model, t0, k_max, step=FD_STEP):
    """
    Rank of the controllability matrix at t0.

    :param model: the LinearModel
    :param t0: the time, t0 >= 0
    :param k_max: maximum number of D applications
    :param step: finite difference step for table coefficients
    :return: dictionary with rank, satisfied, k_used, condition_a,
             condition ('a', 'b' or 'none') and the matrix used
    """

    if t0 < 0:
        raise ValueError('Unacceptable value for t0: %s ' % t0)
    if not isinstance(k_max, int) or k_max < 0:
        raise ValueError('Unacceptable value for k_max: %s ' % k_max)

    d = model.d
    exact = model.Q.kind != 'table' and model.S.kind != 'table'

    condition_a = _rank(model.S.evaluate(t0)) == d

    k_used = 0
    rank = 0
    matrix = None
    if exact:
        blocks = _blocks_polynomial(model, t0, k_max)
        for k in range(k_max + 1):
            matrix = np.hstack(blocks[:k + 1])
            rank = _rank(matrix)
            k_used = k
            if rank == d:
                break
    else:
        # Increase k one step at a time, each level re-running the stencil
        for k in range(k_max + 1):
            blocks = _blocks_finite_difference(model, t0, k, step)
            matrix = np.hstack(blocks)
            rank = _rank(matrix)
            k_used = k
            if rank == d:
                break

    satisfied = rank == d
    if condition_a:
        condition = 'a'
    elif satisfied:
        condition = 'b'
    else:
        condition = 'none'

    logger.debug('Controllability at t0=%g: rank %d with k=%d', t0, rank,
                 k_used)

    return {'rank': rank,
            'satisfied': satisfied,
            'k_used': k_used,
            'condition_a': condition_a,
            'condition': condition,
            'matrix': matrix}
