"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Kernels.Controllability import controllability_check
from Model.CoefficientFunction import CoefficientFunction
from Model.LinearModel import LinearModel
from Utilities.BridgeErrors import DifferentiationError

import numpy as np
import pytest


def test_integrated_wiener(integrated_wiener_model):
    result = controllability_check(integrated_wiener_model, 0.5, 3)

    assert result['rank'] == 2
    assert result['k_used'] == 1
    assert result['satisfied']
    assert not result['condition_a']
    assert result['condition'] == 'b'
    assert result['matrix'].shape == (2, 2)


def test_scalar_noise_is_enough(ou_model):
    result = controllability_check(ou_model, 0.0, 3)

    assert result['satisfied']
    assert result['k_used'] == 0
    assert result['condition'] == 'a'


def test_silent_noise():
    model = LinearModel.constant(np.eye(2), [[0.0], [0.0]],
                                 [[0.0], [0.0]])
    result = controllability_check(model, 0.2, 4)

    assert result['rank'] == 0
    assert not result['satisfied']
    assert result['condition'] == 'none'


def test_uncontrollable_direction():
    # The second coordinate never feels the noise
    model = LinearModel.constant([[-1.0, 0.0], [0.0, -2.0]],
                                 [[0.0], [0.0]], [[1.0], [0.0]])
    result = controllability_check(model, 0.0, 5)

    assert result['rank'] == 1
    assert result['k_used'] == 5
    assert not result['satisfied']


def test_time_dependent_noise_polynomial():
    # S(t) = (t, 1)^T, Q = 0: D S = (1, 0)^T
    Q = CoefficientFunction.constant(np.zeros((2, 2)))
    r = CoefficientFunction.constant([[0.0], [0.0]])
    S = CoefficientFunction.polynomial([[[0.0], [1.0]], [[1.0], [0.0]]])
    model = LinearModel(2, 1, Q, r, S)

    result = controllability_check(model, 0.0, 2)
    assert result['satisfied'] and result['k_used'] == 1


def _tabled_chain():
    Q = CoefficientFunction.table([0.0, 1.0], [[[0.0, 1.0], [0.0, 0.0]],
                                               [[0.0, 1.0], [0.0, 0.0]]])
    r = CoefficientFunction.constant([[0.0], [0.0]])
    S = CoefficientFunction.constant([[0.0], [1.0]])
    return LinearModel(2, 1, Q, r, S)


def test_table_finite_differences():
    result = controllability_check(_tabled_chain(), 0.5, 3)

    assert result['rank'] == 2
    assert result['k_used'] == 1


def test_table_stencil_outside_knots():
    with pytest.raises(DifferentiationError):
        controllability_check(_tabled_chain(), 0.0, 3)


@pytest.mark.parametrize('t0,k_max', [(-1.0, 2), (0.0, -1), (0.0, 1.5)])
def test_bad_arguments(ou_model, t0, k_max):
    with pytest.raises(ValueError):
        controllability_check(ou_model, t0, k_max)
