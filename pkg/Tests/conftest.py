"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Kernels.BridgeKernel import BridgeKernel
from Model.LinearModel import LinearModel
from Model.ModelFile import load_model

import os

import pytest

"""
Shared fixtures: the shipped model files and bridge kernels built on them.
"""

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MODELS = os.path.join(ROOT, 'Model', 'Models')


def model_path(name):
    return os.path.join(MODELS, name + '.yaml')


@pytest.fixture(scope='session')
def root_dir():
    return ROOT


@pytest.fixture(scope='session')
def ou_model():
    # q = -0.5, sigma = 1
    return load_model(model_path('ou'))


@pytest.fixture(scope='session')
def ou_q1_model():
    return load_model(model_path('ou_q1'))


@pytest.fixture(scope='session')
def wiener_model():
    return load_model(model_path('wiener'))


@pytest.fixture(scope='session')
def integrated_wiener_model():
    return load_model(model_path('integrated_wiener'))


@pytest.fixture(scope='session')
def poly2d_model():
    return load_model(model_path('poly2d'))


@pytest.fixture(scope='session')
def tabled_ou_model():
    return load_model(model_path('tabled_ou'))


@pytest.fixture(scope='session')
def forced_model():
    return LinearModel.scalar(-0.7, 0.8, r=0.3)


@pytest.fixture(scope='session')
def ou_kernel(ou_model):
    return BridgeKernel(ou_model, 1.0, [0.3], [-0.2])


@pytest.fixture(scope='session')
def wiener_kernel(wiener_model):
    return BridgeKernel(wiener_model, 1.0, [0.0], [0.0])


@pytest.fixture(scope='session')
def poly2d_kernel(poly2d_model):
    return BridgeKernel(poly2d_model, 1.0, [0.2, -0.1], [0.5, 0.4])


@pytest.fixture(scope='session')
def tabled_kernel(tabled_ou_model):
    return BridgeKernel(tabled_ou_model, 1.0, [0.1], [0.4])


@pytest.fixture(scope='session')
def forced_kernel(forced_model):
    return BridgeKernel(forced_model, 1.0, [0.3], [-0.2])
