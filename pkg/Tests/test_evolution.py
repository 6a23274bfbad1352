"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Evolution.EvolutionOperator import EvolutionOperator
from Utilities.BridgeErrors import HorizonError
from model_strategies import polynomial_models

from hypothesis import given, settings, HealthCheck

import numpy as np
import pytest

"""
The evolution operator E(t, s).
"""


def test_scalar_exponential(ou_model):
    evolution = EvolutionOperator(ou_model, horizon=2.0)

    for s, t in [(0.0, 1.0), (0.3, 1.7), (1.5, 0.2)]:
        assert evolution.evolve(s, t)[0, 0] == \
            pytest.approx(np.exp(-0.5 * (t - s)), rel=1e-9)


def test_nilpotent_drift(integrated_wiener_model):
    evolution = EvolutionOperator(integrated_wiener_model)

    np.testing.assert_allclose(evolution.evolve(0.2, 0.9),
                               [[1.0, 0.7], [0.0, 1.0]], atol=1e-10)


def test_table_drift_integrates_knot_to_knot(tabled_ou_model):
    evolution = EvolutionOperator(tabled_ou_model)
    Q = tabled_ou_model.Q

    for s, t in [(0.0, 0.5), (0.1, 0.9), (0.6, 1.0)]:
        expected = np.exp(Q.antiderivative(t) - Q.antiderivative(s))[0, 0]
        assert evolution.evolve(s, t)[0, 0] == pytest.approx(expected,
                                                             rel=1e-8)


def test_cocycle_and_inverse(poly2d_model):
    evolution = EvolutionOperator(poly2d_model)
    E = evolution.evolve

    np.testing.assert_allclose(E(0.5, 0.9) @ E(0.1, 0.5), E(0.1, 0.9),
                               rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(E(0.7, 0.2) @ E(0.2, 0.7), np.eye(2),
                               atol=1e-9)
    np.testing.assert_allclose(E(0.4, 0.4), np.eye(2))


def test_vectorized_forms(poly2d_model):
    evolution = EvolutionOperator(poly2d_model)
    us = np.array([0.0, 0.25, 0.6])

    many = evolution.evolve_many(us, 0.1)
    back = evolution.evolve_from_many(0.8, us)
    for i, u in enumerate(us):
        np.testing.assert_allclose(many[i], evolution.evolve(0.1, u),
                                   rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(back[i], evolution.evolve(u, 0.8),
                                   rtol=1e-12, atol=1e-14)


def test_series_oracle(poly2d_model, tabled_ou_model):
    for model in (poly2d_model, tabled_ou_model):
        evolution = EvolutionOperator(model)
        for t in (0.3, 1.0):
            np.testing.assert_allclose(
                evolution.evolve_series(0.0, t, terms=24, nodes=24),
                evolution.evolve(0.0, t), rtol=1e-8, atol=1e-10)


def test_growth_bound(poly2d_model):
    evolution = EvolutionOperator(poly2d_model)

    for t in (0.25, 0.5, 1.0):
        assert np.linalg.norm(evolution.evolve(0.0, t), 2) <= \
            evolution.growth_bound(0.0, t) * (1.0 + 1e-8)


def test_horizon_extension(ou_model):
    evolution = EvolutionOperator(ou_model, horizon=0.5)
    value = evolution.evolve(0.0, 3.0)[0, 0]

    assert evolution.horizon >= 3.0
    assert value == pytest.approx(np.exp(-1.5), rel=1e-9)


def test_frozen_horizon(ou_model):
    evolution = EvolutionOperator(ou_model, horizon=1.0)
    evolution.freeze()

    assert evolution.frozen
    evolution.evolve(0.0, 1.0)
    with pytest.raises(HorizonError):
        evolution.evolve(0.0, 1.5)


def test_negative_time(ou_model):
    evolution = EvolutionOperator(ou_model)

    with pytest.raises(ValueError):
        evolution.evolve(-0.1, 0.5)


def test_bad_tolerances(ou_model):
    with pytest.raises(ValueError):
        EvolutionOperator(ou_model, rtol=0.0)


def _relative(lhs, rhs):
    return np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(rhs))


@pytest.mark.slow
@settings(max_examples=100, deadline=None,
          suppress_health_check=[HealthCheck.too_slow])
@given(polynomial_models())
def test_properties_on_random_polynomial_models(model):
    evolution = EvolutionOperator(model)
    E = evolution.evolve
    Q = model.Q
    d = model.d
    grid = np.linspace(0.0, 1.0, 5)

    for i, s in enumerate(grid):
        for t in grid[i + 1:]:
            assert _relative(E(t, s) @ E(s, t), np.eye(d)) < 1e-8
            for u in grid[i + 1:]:
                if u < t:
                    assert _relative(E(u, t) @ E(s, u), E(s, t)) < 1e-8

    # Central differences, O(h^2) with h = 1e-4
    h = 1e-4
    for s, t in [(0.2, 0.7), (0.6, 0.3), (0.45, 0.9)]:
        dt = (E(s, t + h) - E(s, t - h)) / (2 * h)
        assert _relative(dt, Q.evaluate(t) @ E(s, t)) < 100 * h ** 2
        ds = (E(s + h, t) - E(s - h, t)) / (2 * h)
        assert _relative(ds, -E(s, t) @ Q.evaluate(s)) < 100 * h ** 2
