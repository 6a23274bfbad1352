"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Samplers.ExactBridgeSampler import sample_bridge_exact
from Utilities.EnsembleRecorder import EnsembleRecorder, read_header, \
    meta_path, LINBRIDGE_VERSION

import json
import logging
import os

import numpy as np
import pytest


@pytest.fixture
def ensemble(poly2d_kernel):
    return sample_bridge_exact(poly2d_kernel, [0.0, 0.3, 0.7, 1.0], 6, 12,
                               config={'SAMPLING': {'method': 'exact'}})


def test_save_and_load(ensemble, tmp_path):
    path = str(tmp_path / 'paths.csv')
    recorder = EnsembleRecorder(path)
    recorder.record(ensemble)
    recorder.save()

    loaded = EnsembleRecorder().load(path)

    assert loaded == ensemble
    np.testing.assert_array_equal(loaded.states, ensemble.states)
    np.testing.assert_array_equal(loaded.grid, ensemble.grid)
    assert loaded.T == ensemble.T
    assert loaded.config == {'SAMPLING': {'method': 'exact'}}


def test_header_and_sidecar(ensemble, tmp_path):
    path = str(tmp_path / 'paths.csv')
    recorder = EnsembleRecorder()
    recorder.record(ensemble)
    recorder.save(path)

    header = read_header(path)
    assert header['linbridge'] == LINBRIDGE_VERSION
    assert header['method'] == 'bridge_exact'
    assert header['seed'] == '12'
    assert header['model_hash'] == ensemble.model_hash

    with open(path) as file:
        columns = [line for line in file if not line.startswith('#')][0]
    assert columns.strip() == 'path,t,x1,x2'

    with open(meta_path(path)) as file:
        meta = json.load(file)
    assert meta['n_paths'] == 6
    assert meta['grid'] == [0.0, 0.3, 0.7, 1.0]


def test_missing_sidecar(ensemble, tmp_path, caplog):
    path = str(tmp_path / 'paths.csv')
    recorder = EnsembleRecorder(path)
    recorder.record(ensemble)
    recorder.save()
    os.remove(meta_path(path))

    with caplog.at_level(logging.WARNING):
        loaded = EnsembleRecorder(path).load()

    assert 'No sidecar' in caplog.text
    assert loaded.seed == 12
    assert loaded.T is None
    np.testing.assert_array_equal(loaded.states, ensemble.states)


def test_stdout_without_path(ensemble, capsys):
    recorder = EnsembleRecorder()
    recorder.record(ensemble)
    recorder.save()

    out = capsys.readouterr().out
    assert out.startswith('# linbridge %s' % LINBRIDGE_VERSION)
    assert len(out.strip().splitlines()) == 4 + 1 + 6 * 4


def test_recorder_errors(tmp_path):
    with pytest.raises(ValueError):
        EnsembleRecorder().save(str(tmp_path / 'x.csv'))

    with pytest.raises(FileNotFoundError):
        EnsembleRecorder().load(str(tmp_path / 'missing.csv'))

    with pytest.raises(ValueError):
        EnsembleRecorder().load()
