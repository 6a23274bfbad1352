"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

"""
BridgeErrors collects the exceptions raised by LinBridge. Every error derives
from BridgeError so that the entry point can report them uniformly.
"""


class BridgeError(Exception):
    pass


class ConfigError(BridgeError, ValueError):
    pass


class SchemaError(BridgeError, ValueError):
    """
    A model file does not conform to the model schema.
    """
    pass


class KnotError(SchemaError):
    """
    Table knots are not strictly increasing (or there are fewer than two).
    """
    pass


class SolverError(BridgeError, ArithmeticError):
    pass


class QuadError(BridgeError, ArithmeticError):
    pass


class NotPD(BridgeError, ArithmeticError):
    """
    A matrix that must be symmetric positive definite failed its Cholesky
    factorization. For kappa this means the model violates the standing
    positive definiteness assumption.
    """
    pass


class SingularGamma(BridgeError, ArithmeticError):
    pass


class HorizonError(BridgeError, ValueError):
    """
    A kernel was requested too close to (or beyond) the bridge horizon T.
    """
    pass


class DifferentiationError(BridgeError, ValueError):
    pass


class DomainError(BridgeError, ValueError):
    pass


class GridMismatch(BridgeError, ValueError):
    pass


class DensityMismatch(BridgeError, ArithmeticError):
    """
    The Gaussian and ratio routes of the bridge density disagree.
    """
    pass
