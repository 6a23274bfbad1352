"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.GaussLaw import GaussLaw
from Samplers.PathEnsemble import PathEnsemble
from Utilities.BridgeErrors import ConfigError, GridMismatch
from Verify.MomentSummary import estimate_moments, compare_to_law, \
    compare_ensembles
from Verify.VerifyReport import VerifyReport
from Verify.VerifySuite import run_suite, comparison_times
from Samplers.BridgeSDESampler import sde_grid

import json
import logging

import numpy as np
import pytest

"""
Moment summaries, reports and the verification suites with their negative
controls.
"""

OU_BRIDGE = {'T': 1.0, 'a': [0.3], 'b': [-0.2]}


def _ensemble(states, grid):
    states = np.asarray(states, dtype=float)
    return PathEnsemble(grid, states, 'bridge_exact', 0,
                        np.arange(states.shape[0]), None)


def _config(bridge=None, **verify):
    return {'BRIDGE': dict(bridge or OU_BRIDGE), 'VERIFY': verify}


def test_moments_of_a_constant_ensemble():
    states = np.tile([[1.0, 2.0], [3.0, 4.0]], (5, 1, 1))
    ms = estimate_moments(_ensemble(states, [0.0, 0.5]))

    np.testing.assert_array_equal(ms.means, [[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(ms.cov, np.zeros((4, 4)))
    assert ms.n_paths == 5

    law = [GaussLaw([1.0, 2.0], np.zeros((2, 2))),
           GaussLaw([3.0, 4.0], np.zeros((2, 2)))]
    assert compare_to_law(ms, law).passed


def test_moments_need_two_paths():
    with pytest.raises(ValueError):
        estimate_moments(_ensemble(np.zeros((1, 2, 1)), [0.0, 0.5]))


def test_sample_moments():
    rng = np.random.default_rng(0)
    states = rng.standard_normal((50, 3, 2))
    ms = estimate_moments(_ensemble(states, [0.0, 0.4, 0.8]))
    flat = states.reshape(50, -1)

    np.testing.assert_allclose(ms.means.ravel(), flat.mean(axis=0))
    np.testing.assert_allclose(ms.cov, np.cov(flat.T), atol=1e-14)
    np.testing.assert_allclose(ms.block(1), np.cov(states[:, 1].T),
                               atol=1e-14)
    np.testing.assert_allclose(ms.se_mean(),
                               np.sqrt(np.diag(ms.cov).reshape(3, 2) / 50))


def test_comparisons_detect_a_shifted_mean():
    rng = np.random.default_rng(1)
    grid = [0.0, 0.5]
    states = rng.standard_normal((4000, 2, 1))
    law = [GaussLaw([0.0], [[1.0]]), GaussLaw([0.0], [[1.0]])]

    ms = estimate_moments(_ensemble(states, grid))
    shifted = estimate_moments(_ensemble(states + 0.5, grid))

    assert compare_to_law(ms, law).passed
    report = compare_to_law(shifted, law)
    assert not report.passed
    assert {c['name'] for c in report.failures()} == {'mean[t=0][0]',
                                                      'mean[t=0.5][0]'}

    other = estimate_moments(_ensemble(
        rng.standard_normal((4000, 2, 1)), grid))
    assert compare_ensembles(ms, other).passed
    assert not compare_ensembles(shifted, other).passed


def test_comparisons_need_matching_grids():
    ms = estimate_moments(_ensemble(np.zeros((3, 2, 1)), [0.0, 0.5]))
    other = estimate_moments(_ensemble(np.zeros((3, 2, 1)), [0.0, 0.6]))

    with pytest.raises(GridMismatch):
        compare_ensembles(ms, other)
    with pytest.raises(GridMismatch):
        compare_to_law(ms, [GaussLaw([0.0], [[1.0]])])
    with pytest.raises(GridMismatch):
        compare_to_law(ms, [GaussLaw([0.0], [[1.0]])] * 2, times=[0.0, 0.6])


def test_report_rules():
    report = VerifyReport('unit', model_hash='abc', seed=3)
    report.add_check('b', 0.5, 1.0)
    report.add_check('a', 2.0, 1.0)
    assert not report.passed
    assert [c['name'] for c in report.sorted_checks()] == ['a', 'b']
    assert report.max_statistic() == 2.0

    report = VerifyReport('unit')
    report.add_check('inf', np.inf, 1.0)
    report.add_check('nan', np.nan, 1.0)
    report.add_error('broken', ValueError('no'))
    assert not report.passed
    assert len(report.failures()) == 3

    data = json.loads(report.to_json())
    statistics = {c['name']: c['statistic'] for c in data['checks']}
    assert statistics == {'broken': None, 'inf': None, 'nan': None}
    assert data['checks'][0]['error'] == 'ValueError: no'
    assert report.checks[0]['statistic'] == np.inf
    assert np.isnan(report.checks[1]['statistic'])


def test_comparison_times_lie_on_the_euler_grid():
    times = comparison_times(1.0, 4, 64)
    grid = sde_grid(1.0, 64)

    assert len(times) == 4
    assert np.all(np.isin(times, grid))
    assert 0.0 < times[0] and times[-1] < 1.0


def test_identities_suite(ou_model):
    report = run_suite('identities', ou_model, _config())

    assert report.passed, report.failures()
    assert report.suite == 'identities'
    assert report.model_hash == ou_model.model_hash()
    assert not report.retried


def test_identities_negative_control(ou_model):
    config = _config(pairs=2, CONTROL={'kernel_scale': 0.01})
    report = run_suite('identities', ou_model, config)

    assert not report.passed
    assert report.max_statistic('identity:gamma_forms') > 1e-3


@pytest.mark.parametrize('name', ['ou_model', 'tabled_ou_model',
                                  'forced_model', 'poly2d_model'])
def test_conditioning_suite(name, request):
    model = request.getfixturevalue(name)
    bridge = {'T': 1.0, 'a': [0.2] * model.d, 'b': [0.4] * model.d}
    report = run_suite('conditioning', model, _config(bridge, times=3))

    assert report.passed, report.failures()


def test_conditioning_negative_control(wiener_model):
    config = _config({'T': 1.0}, times=3, CONTROL={'endpoint_shift': 0.5})
    report = run_suite('conditioning', wiener_model, config)

    assert not report.passed
    names = {c['name'] for c in report.failures()}
    assert 'single:mean' in names


@pytest.mark.parametrize('name', ['poly2d_model', 'tabled_ou_model',
                                  'integrated_wiener_model'])
def test_evolution_suite(name, request):
    model = request.getfixturevalue(name)
    report = run_suite('evolution', model, _config({'T': 1.0}))

    assert report.passed, report.failures()


def test_unknown_suite_and_control(ou_model):
    with pytest.raises(ConfigError):
        run_suite('bogus', ou_model, _config())

    with pytest.raises(ConfigError):
        run_suite('identities', ou_model,
                  _config(CONTROL={'kappa_twist': 1.0}))


def test_onedim_suite_rejects_vector_models(poly2d_model):
    report = run_suite('onedim', poly2d_model,
                       _config({'T': 1.0}, paths=50, retry=False))

    assert not report.passed
    assert 'DomainError' in report.failures()[0]['error']


def test_small_ensembles_are_flagged(ou_model, caplog):
    with caplog.at_level(logging.WARNING, logger='Verify.VerifySuite'):
        run_suite('onedim', ou_model, _config(paths=200, times=2))

    assert 'standard error thresholds are wide' in caplog.text


def test_broken_kernel_is_a_failed_check(ou_model):
    report = run_suite('identities', ou_model,
                       {'BRIDGE': {'T': 1.0, 'a': [0.0, 1.0]}})

    assert not report.passed
    assert report.failures()[0]['name'] == 'kernel'


@pytest.mark.slow
def test_onedim_suite(ou_model, tabled_ou_model):
    for model in (ou_model, tabled_ou_model):
        report = run_suite('onedim', model, _config(paths=20000, times=4))
        assert report.passed, report.failures()


@pytest.mark.slow
def test_samplers_suite(ou_q1_model):
    config = _config(paths=20000, steps=512, times=3, seed=4)
    report = run_suite('samplers', ou_q1_model, config)

    assert report.passed, report.failures()
    assert report.checks


@pytest.mark.slow
def test_samplers_negative_control(ou_q1_model):
    config = _config(paths=20000, steps=256, times=3,
                     CONTROL={'variance_scale': 0.3})
    report = run_suite('samplers', ou_q1_model, config)

    assert not report.passed
    assert report.retried
