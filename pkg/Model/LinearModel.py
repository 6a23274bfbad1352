"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Model.CoefficientFunction import CoefficientFunction
from Utilities.BridgeErrors import SchemaError

import hashlib
import yaml

"""
LinearModel holds the coefficients of the linear SDE

    dZ_t = (Q(t) Z_t + r(t)) dt + S(t) dB_t

with state dimension d and noise dimension p. Models are immutable once
built and can be shared between threads.
"""


class LinearModel:
    def __init__(self, d, p, Q, r, S):
        """
        Validate and store the model.

        :param d: state dimension
        :param p: noise dimension
        :param Q: d x d CoefficientFunction
        :param r: d x 1 CoefficientFunction
        :param S: d x p CoefficientFunction
        """

        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise SchemaError('Unacceptable value for dim: %s ' % d)

        if not isinstance(p, int) or isinstance(p, bool) or p < 1:
            raise SchemaError('Unacceptable value for noise_dim: %s ' % p)

        for name, coeff, shape in (('Q', Q, (d, d)),
                                   ('r', r, (d, 1)),
                                   ('S', S, (d, p))):
            if not isinstance(coeff, CoefficientFunction):
                raise SchemaError('Coefficient %s is not a coefficient '
                                  'function' % name)
            if coeff.shape != shape:
                raise SchemaError('Coefficient %s has shape %s, expected %s'
                                  % (name, coeff.shape, shape))

        self._d = d
        self._p = p
        self._Q = Q
        self._r = r
        self._S = S
        self._hash = None

    @classmethod
    def constant(cls, Q, r, S):
        """
        Build a model with constant coefficients.

        :param Q: d x d matrix
        :param r: d x 1 matrix
        :param S: d x p matrix
        :return: a LinearModel
        """
        Q = CoefficientFunction.constant(Q)
        r = CoefficientFunction.constant(r)
        S = CoefficientFunction.constant(S)
        return cls(Q.shape[0], S.shape[1], Q, r, S)

    @classmethod
    def scalar(cls, q, sigma, r=0.0):
        """
        The one dimensional model dZ = (q Z + r) dt + sigma dB.
        """
        return cls.constant([[q]], [[r]], [[sigma]])

    d = property(lambda self: self._d)
    p = property(lambda self: self._p)
    Q = property(lambda self: self._Q)
    r = property(lambda self: self._r)
    S = property(lambda self: self._S)

    def noise(self, t):
        """
        The diffusion matrix S(t) S(t)^T.
        """
        s = self._S.evaluate(t)
        return s @ s.T

    def noise_many(self, ts):
        s = self._S.evaluate_many(ts)
        return s @ s.transpose(0, 2, 1)

    def has_drift_offset(self):
        """
        Check whether r is not identically zero.
        """
        if self._r.kind == 'table':
            return bool(self._r.values.any())
        return bool(self._r.coeffs.any())

    def to_dict(self):
        return {'dim': self._d,
                'noise_dim': self._p,
                'Q': self._Q.to_dict(),
                'r': self._r.to_dict(),
                'S': self._S.to_dict()}

    def canonical_text(self):
        """
        The canonical YAML text of the model. Floats are written with their
        shortest round-trip representation.

        :return: a string
        """
        return yaml.safe_dump(self.to_dict(), sort_keys=False,
                              default_flow_style=None)

    def model_hash(self):
        """
        SHA-256 of the canonical serialization.

        :return: hex digest
        """
        if self._hash is None:
            self._hash = hashlib.sha256(
                self.canonical_text().encode('utf-8')).hexdigest()
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented

        return self._d == other.d and self._p == other.p and \
            self._Q == other.Q and self._r == other.r and self._S == other.S

    def __hash__(self):
        return hash(self.model_hash())

    def __repr__(self):
        return 'LinearModel(d=%d, p=%d, Q=%s, r=%s, S=%s)' % \
            (self._d, self._p, self._Q.kind, self._r.kind, self._S.kind)
