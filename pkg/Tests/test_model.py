"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Model.CoefficientFunction import CoefficientFunction, eval_coeff
from Model.LinearModel import LinearModel
from Model.ModelFile import parse_model, serialize_model, load_model, \
    save_model
from Utilities.BridgeErrors import SchemaError, KnotError, \
    DifferentiationError

import numpy as np
import pytest

"""
Coefficient functions, models and model files.
"""

OU_TEXT = """
dim: 1
noise_dim: 1
Q: {kind: constant, rows: [[-0.5]]}
r: {kind: constant, rows: [[0.0]]}
S: {kind: constant, rows: [[1.0]]}
"""


def test_polynomial_evaluation_and_calculus():
    f = CoefficientFunction.polynomial([[[1.0]], [[2.0]]])

    assert f.degree == 1
    assert f.evaluate(3.0)[0, 0] == pytest.approx(7.0)
    assert f.derivative(3.0)[0, 0] == pytest.approx(2.0)
    assert f.derivative(3.0, order=2)[0, 0] == 0.0
    assert f.antiderivative(3.0)[0, 0] == pytest.approx(12.0)
    np.testing.assert_allclose(f.antiderivative_many([0.0, 1.0, 3.0])[:, 0, 0],
                               [0.0, 2.0, 12.0])


def test_evaluate_many_matches_evaluate():
    f = CoefficientFunction.polynomial([[[1.0, 0.5], [0.0, -1.0]],
                                        [[0.2, 0.0], [0.3, 0.1]],
                                        [[0.0, 1.0], [0.0, 0.0]]])
    ts = np.linspace(0.0, 2.0, 7)
    many = f.evaluate_many(ts)

    for t, value in zip(ts, many):
        np.testing.assert_allclose(value, f.evaluate(t), rtol=1e-14)


def test_table_interpolates_and_clamps():
    f = CoefficientFunction.table([0.0, 1.0], [[[0.0]], [[2.0]]])

    assert f.evaluate(0.25)[0, 0] == pytest.approx(0.5)
    assert f.evaluate(3.0)[0, 0] == pytest.approx(2.0)
    assert f.antiderivative(0.5)[0, 0] == pytest.approx(0.25)
    assert f.antiderivative(1.0)[0, 0] == pytest.approx(1.0)
    assert f.derivative(0.5)[0, 0] == pytest.approx(2.0)


def test_table_derivative_outside_knots():
    f = CoefficientFunction.table([0.0, 1.0], [[[0.0]], [[2.0]]])

    with pytest.raises(DifferentiationError):
        f.derivative(0.0)


@pytest.mark.parametrize('knots', [[0.0, 0.5, 0.5], [1.0, 0.5, 2.0],
                                   [0.0]])
def test_bad_knots(knots):
    values = [[[1.0]]] * len(knots)

    with pytest.raises(KnotError):
        CoefficientFunction.table(knots, values)


def test_mixed_shapes_rejected():
    with pytest.raises(SchemaError):
        CoefficientFunction.polynomial([[[1.0]], [[1.0, 2.0]]])


def test_non_finite_rejected():
    with pytest.raises(SchemaError):
        CoefficientFunction.constant([[float('nan')]])


def test_time_invariance():
    assert CoefficientFunction.constant([[1.0]]).is_time_invariant()
    assert CoefficientFunction.polynomial([[[1.0]], [[0.0]]]) \
        .is_time_invariant()
    assert not CoefficientFunction.polynomial([[[1.0]], [[0.1]]]) \
        .is_time_invariant()


def test_eval_coeff_negative_time():
    with pytest.raises(ValueError):
        eval_coeff(CoefficientFunction.constant([[1.0]]), -0.1)


def test_model_shapes_checked():
    Q = CoefficientFunction.constant(np.eye(2))
    r = CoefficientFunction.constant([[0.0], [0.0]])
    S = CoefficientFunction.constant([[1.0], [0.0], [0.0]])

    with pytest.raises(SchemaError):
        LinearModel(2, 1, Q, r, S)

    with pytest.raises(SchemaError):
        LinearModel(0, 1, Q, r, S)


def test_parse_model():
    model = parse_model(OU_TEXT)

    assert model.d == 1 and model.p == 1
    assert model.Q.evaluate(0.3)[0, 0] == -0.5
    assert not model.has_drift_offset()
    assert model == LinearModel.scalar(-0.5, 1.0)


@pytest.mark.parametrize('text', ['[1, 2]',
                                  'dim: 1\nnoise_dim: 1\n',
                                  OU_TEXT.replace('constant, rows',
                                                  'wavelet, rows'),
                                  OU_TEXT.replace('noise_dim: 1',
                                                  'noise_dim: 2'),
                                  'dim: [unclosed'])
def test_parse_model_errors(text):
    with pytest.raises(SchemaError):
        parse_model(text)


def test_serialization_is_canonical(poly2d_model, tabled_ou_model):
    for model in (poly2d_model, tabled_ou_model):
        text = serialize_model(model)
        again = parse_model(text)

        assert again == model
        assert serialize_model(again) == text
        assert again.model_hash() == model.model_hash()


def test_hash_depends_on_coefficients():
    assert LinearModel.scalar(-0.5, 1.0).model_hash() != \
        LinearModel.scalar(-0.5, 1.0 + 1e-15).model_hash()


def test_save_and_load(tmp_path, poly2d_model):
    path = str(tmp_path / 'model.yaml')
    save_model(poly2d_model, path)

    assert load_model(path) == poly2d_model


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_model(str(tmp_path / 'nothing.yaml'))


def test_noise_matrix(poly2d_model):
    t = 0.4
    S = poly2d_model.S.evaluate(t)

    np.testing.assert_allclose(poly2d_model.noise(t), S @ S.T)
    np.testing.assert_allclose(poly2d_model.noise_many([t])[0], S @ S.T)
