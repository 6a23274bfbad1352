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
from OneDim.Lamperti import lamperti_time_change, lamperti_transform, \
    sample_lamperti_z
from OneDim.MartingaleBridge import martingale_bridge_forms
from OneDim.OUBridge import ou_bridge, wiener_bridge
from OneDim.ScalarModel import ScalarModel, gamma_1d, m_1d, n_ab_1d, \
    sigma_1d, integral_1d_coeffs, anticipative_1d_forms, \
    anticipative_1d_coeffs
from Samplers.AnticipativeSampler import anticipative_coefficients
from Samplers.ExactZSampler import sample_z
from Utilities.BridgeErrors import DomainError
from Verify.MomentSummary import estimate_moments, compare_ensembles

import numpy as np
import pytest

"""
Scalar closed forms, checked against the general kernels.
"""

A, B, T = 0.3, -0.2, 1.0
TIMES = (0.1, 0.35, 0.6, 0.85)


def rel(x, y):
    return abs(x - y) / max(1.0, abs(y))


@pytest.mark.parametrize('name', ['ou_kernel', 'tabled_kernel',
                                  'forced_kernel', 'wiener_kernel'])
def test_scalar_forms_match_kernels(name, request):
    kernel = request.getfixturevalue(name)
    m = ScalarModel.from_linear_model(kernel.model)
    a, b = float(kernel.a[0]), float(kernel.b[0])

    for s, t in [(0.0, 0.4), (0.2, 0.7), (0.5, 0.9)]:
        assert rel(gamma_1d(m, s, t), kernel.kappa(s, t)[0, 0]) < 1e-8
        assert rel(sigma_1d(m, s, t, T),
                   kernel.sigma_bridge(s, t)[0, 0]) < 1e-8
        assert rel(n_ab_1d(m, a, b, s, t, T),
                   kernel.bridge_mean(kernel.a, s, t)[0]) < 1e-8
        assert rel(m_1d(m, 0.7, s, t),
                   kernel.mean_forward([0.7], s, t)[0]) < 1e-8


@pytest.mark.parametrize('name', ['ou_kernel', 'tabled_kernel',
                                  'forced_kernel'])
def test_integral_and_anticipative_coefficients(name, request):
    kernel = request.getfixturevalue(name)
    m = ScalarModel.from_linear_model(kernel.model)
    a, b = float(kernel.a[0]), float(kernel.b[0])

    for t in TIMES:
        coeffs = integral_1d_coeffs(m, a, b, T, t)
        mean = coeffs['coef_a'] * a + coeffs['coef_b'] * b + coeffs['offset']
        assert rel(mean, kernel.bridge_mean(kernel.a, 0.0, t)[0]) < 1e-8

        u = 0.5 * t
        expected = (kernel.gamma(t, T) @ kernel.gamma_inv(u))[0, 0] * \
            kernel.model.S.evaluate(u)[0, 0]
        assert rel(coeffs['kernel'](u), expected) < 1e-8

        A_t, C_t = anticipative_coefficients(kernel, t)
        forms = anticipative_1d_forms(m, a, b, T, t)
        gamma_form = anticipative_1d_coeffs(m, a, b, T, t)
        assert rel(gamma_form['coef_a'], A_t[0, 0]) < 1e-8
        assert rel(gamma_form['coef_b'], C_t[0, 0]) < 1e-8
        for form in forms.values():
            for key, value in form.items():
                assert rel(value, gamma_form[key]) < 1e-8


def test_sinh_form_only_for_constant_ou(ou_kernel, tabled_kernel,
                                        forced_kernel):
    ou = ScalarModel.from_linear_model(ou_kernel.model)
    assert 'sinh' in anticipative_1d_forms(ou, A, B, T, 0.4)

    for kernel in (tabled_kernel, forced_kernel):
        m = ScalarModel.from_linear_model(kernel.model)
        assert 'sinh' not in anticipative_1d_forms(m, A, B, T, 0.4)


@pytest.mark.parametrize('q', [-1.0, 0.5, 2.0])
def test_ou_bridge_sign_invariance(q):
    plus = ou_bridge(q, 0.8, A, B, T)
    minus = ou_bridge(-q, 0.8, A, B, T)

    for s, t in [(0.0, 0.3), (0.3, 0.7), (0.1, 0.95)]:
        assert abs(plus.mean(t) - minus.mean(t)) < 1e-12
        assert abs(plus.var(s, t) - minus.var(s, t)) < 1e-12
        assert abs(plus.sde_drift(t, 0.4) - minus.sde_drift(t, 0.4)) < 1e-12
        assert abs(plus.integral_coeff(s, t) -
                   minus.integral_coeff(s, t)) < 1e-12
        for key, value in plus.anticipative_coeffs(t).items():
            assert abs(value - minus.anticipative_coeffs(t)[key]) < 1e-12


def test_ou_bridge_boundaries():
    bridge = ou_bridge(1.3, 0.5, A, B, T)

    assert bridge.mean(0.0) == pytest.approx(A)
    assert bridge.mean(T) == pytest.approx(B)
    assert bridge.var(0.4, T) == pytest.approx(0.0, abs=1e-15)
    assert bridge.var(0.4, 0.4) == pytest.approx(0.0, abs=1e-15)


def test_wiener_is_the_small_q_limit():
    ou = ou_bridge(1e-4, 0.7, A, B, T)
    wiener = wiener_bridge(0.7, A, B, T)

    for s, t in [(0.0, 0.3), (0.3, 0.7)]:
        assert ou.mean(t) == pytest.approx(wiener.mean(t), rel=1e-6)
        assert ou.var(s, t) == pytest.approx(wiener.var(s, t), rel=1e-6)
        assert ou.sde_drift(t, 0.4) == pytest.approx(
            wiener.sde_drift(t, 0.4), rel=1e-6)
        assert ou.integral_coeff(s, t) == pytest.approx(
            wiener.integral_coeff(s, t), rel=1e-6)


def test_ou_drift_matches_kernel(ou_q1_model):
    from Kernels.BridgeKernel import BridgeKernel

    kernel = BridgeKernel(ou_q1_model, T, [A], [B])
    bridge = ou_bridge(1.0, 1.0, A, B, T)
    for t in TIMES:
        drift, offset = kernel.bridge_drift(t)
        assert drift[0, 0] * 0.4 + offset[0] == \
            pytest.approx(bridge.sde_drift(t, 0.4), rel=1e-8)


@pytest.mark.parametrize('args', [(0.0, 1.0, A, B, T), (1.0, 0.0, A, B, T),
                                  (1.0, 1.0, A, B, 0.0)])
def test_ou_bridge_domain(args):
    with pytest.raises(DomainError):
        ou_bridge(*args)


def test_wiener_bridge_domain():
    with pytest.raises(DomainError):
        wiener_bridge(0.0, A, B, T)


@pytest.mark.parametrize('name', ['ou_kernel', 'tabled_kernel'])
def test_martingale_scaling(name, request):
    kernel = request.getfixturevalue(name)
    m = ScalarModel.from_linear_model(kernel.model)

    for t in TIMES:
        forms = martingale_bridge_forms(m, A, B, T, t)
        scale = np.exp(m.qbar(t))
        gamma_form = anticipative_1d_coeffs(m, A, B, T, t)
        integral = integral_1d_coeffs(m, A, B, T, t)

        for key, value in forms['anticipative_coeffs'].items():
            assert rel(scale * value, gamma_form[key]) < 1e-10
        for key in ('coef_a', 'coef_b'):
            assert rel(scale * forms['integral_coeffs'][key],
                       integral[key]) < 1e-10

        us = np.array([0.0, 0.5 * t])
        np.testing.assert_allclose(scale * forms['integral_kernel'](us),
                                   integral['kernel'](us), rtol=1e-10)
        assert rel(forms['M_qv'], lamperti_time_change(m, t)) < 1e-10


def test_martingale_needs_no_forcing(forced_kernel):
    m = ScalarModel.from_linear_model(forced_kernel.model)

    with pytest.raises(DomainError):
        martingale_bridge_forms(m, A, B, T, 0.5)


def test_scalar_model_domain(poly2d_model):
    with pytest.raises(DomainError):
        ScalarModel.from_linear_model(poly2d_model)

    with pytest.raises(DomainError):
        ScalarModel(-1.0, 0.0, 0.0)

    # sigma(t) = 1 - 2t vanishes at t = 0.5
    with pytest.raises(DomainError):
        ScalarModel(-1.0, 0.0, CoefficientFunction.polynomial([[[1.0]],
                                                               [[-2.0]]]))


def test_scalar_model_round_trip(tabled_ou_model):
    m = ScalarModel.from_linear_model(tabled_ou_model)

    assert m.to_linear_model() == tabled_ou_model
    assert not m.is_constant()
    assert not m.has_forcing()
    assert ScalarModel(0.5, 0.2, 1.0).has_forcing()


def test_lamperti_transform_constant_ou():
    q, sigma = -0.5, 1.0
    m = ScalarModel(q, 0.0, sigma)
    times = np.array([0.0, 0.3, 0.8])

    clock = [lamperti_time_change(m, t) for t in times]
    np.testing.assert_allclose(clock, sigma ** 2 *
                               -np.expm1(-2.0 * q * times) / (2.0 * q),
                               rtol=1e-12, atol=1e-15)

    values = lamperti_transform(m, times, np.array([0.0, 1.0, -1.0]),
                                x0=0.5)
    np.testing.assert_allclose(values, 0.5 * np.exp(q * times) +
                               np.exp(q * times) * [0.0, 1.0, -1.0],
                               rtol=1e-12)

    with pytest.raises(ValueError):
        lamperti_transform(m, times, np.zeros(2))


def test_lamperti_sampler_needs_scalar_model(poly2d_kernel):
    with pytest.raises(DomainError):
        sample_lamperti_z(poly2d_kernel, None, [0.0, 0.5], 10, 0)


@pytest.mark.slow
@pytest.mark.parametrize('name', ['ou_kernel', 'tabled_kernel'])
def test_lamperti_ensemble_matches_exact_z(name, request):
    kernel = request.getfixturevalue(name)
    grid = np.array([0.0, 0.2, 0.5, 0.9])

    changed = sample_lamperti_z(kernel, None, grid, 40000, 31)
    exact = sample_z(kernel, None, grid, 40000, 32)
    report = compare_ensembles(estimate_moments(changed),
                               estimate_moments(exact), 4.0)

    assert changed.method == 'lamperti_z'
    assert report.passed, report.failures()


def test_forced_lamperti_mean(forced_model):
    m = ScalarModel.from_linear_model(forced_model)
    lin = LinearModel.scalar(-0.7, 0.8, r=0.3)

    assert m.to_linear_model() == lin
    value = lamperti_transform(m, [0.6], [0.0], x0=0.2)[0]
    assert value == pytest.approx(m_1d(m, 0.2, 0.0, 0.6), rel=1e-14)
