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
from Model.LinearModel import LinearModel
from Utilities.BridgeErrors import SchemaError

import os.path
import yaml

"""
Reading and writing of model files. A model file is a YAML document:

    dim: 2
    noise_dim: 1
    Q: {kind: constant, rows: [[0.0, 1.0], [0.0, 0.0]]}
    r: {kind: polynomial, coeffs: [[[0.0], [0.0]], [[0.1], [0.0]]]}
    S: {kind: table, knots: [0.0, 1.0], values: [[[0.0], [1.0]], [[0.0], [2.0]]]}
"""


def _require(block, key, where):
    if not isinstance(block, dict) or key not in block:
        raise SchemaError('Missing field %s in %s' % (key, where))
    return block[key]


def _parse_coefficient(block, name):
    kind = _require(block, 'kind', name)

    if kind == 'constant':
        return CoefficientFunction('constant', _require(block, 'rows', name))

    if kind == 'polynomial':
        coeffs = _require(block, 'coeffs', name)
        if not isinstance(coeffs, list):
            raise SchemaError('Coefficients of %s must be a list of matrices'
                              % name)
        return CoefficientFunction('polynomial', coeffs)

    if kind == 'table':
        knots = _require(block, 'knots', name)
        values = _require(block, 'values', name)
        if not isinstance(knots, list) or not isinstance(values, list):
            raise SchemaError('Table %s needs lists of knots and values'
                              % name)
        try:
            knots = [float(k) for k in knots]
        except (TypeError, ValueError):
            raise SchemaError('Non-numeric knot in %s: %s' % (name, knots))
        return CoefficientFunction('table', values, knots=knots)

    raise SchemaError('Unknown kind %s for coefficient %s' % (kind, name))


def parse_model(text):
    """
    Parse the content of a model file.

    :param text: YAML text
    :return: a validated LinearModel
    """

    try:
        tree = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise SchemaError('Model file is not valid YAML: %s' % err)

    if not isinstance(tree, dict):
        raise SchemaError('Model file must contain a mapping')

    d = _require(tree, 'dim', 'model')
    p = _require(tree, 'noise_dim', 'model')

    coeffs = {name: _parse_coefficient(_require(tree, name, 'model'), name)
              for name in ('Q', 'r', 'S')}

    return LinearModel(d, p, coeffs['Q'], coeffs['r'], coeffs['S'])


def serialize_model(model):
    """
    Canonical model-file text of a model.

    :param model: the LinearModel
    :return: YAML text
    """
    return model.canonical_text()


def load_model(path):
    """
    Load a model file.

    :param path: path to the file
    :return: a LinearModel
    """

    if not isinstance(path, str):
        raise ValueError('Unacceptable value for model file name: %s ' % path)

    if not os.path.isfile(path):
        raise FileNotFoundError('Model file %s not found' % path)

    with open(path, encoding='utf-8') as model_file:
        return parse_model(model_file.read())


def save_model(model, path):
    """
    Write the canonical model file.

    :param model: the LinearModel
    :param path: the destination path
    :return: nothing
    """

    if not isinstance(path, str):
        raise ValueError('Unacceptable value for model file name: %s ' % path)

    pdir = os.path.dirname(path)
    if pdir and not os.path.isdir(pdir):
        raise FileNotFoundError('Directory %s does not exist' % pdir)

    with open(path, 'w', encoding='utf-8') as model_file:
        model_file.write(serialize_model(model))
