"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.ConditionalLaw import conditional_fdd
from Densities.GaussLaw import GaussLaw
from Densities.TransitionDensity import transition_density_bridge, \
    bridge_density_ratio, h_function
from Kernels.BridgeKernel import BridgeKernel
from Kernels.Identities import identity_residuals, relative_residual
from Kernels.Quadrature import GaussLegendre
from OneDim.Lamperti import lamperti_time_change, sample_lamperti_z
from OneDim.MartingaleBridge import martingale_bridge_forms
from OneDim.OUBridge import ou_bridge, wiener_bridge
from OneDim.ScalarModel import ScalarModel, gamma_1d, n_ab_1d, sigma_1d, \
    integral_1d_coeffs, anticipative_1d_forms
from Samplers.AnticipativeSampler import sample_bridge_anticipative, \
    anticipative_coefficients
from Samplers.BridgeSDESampler import sample_bridge_sde, sde_grid, \
    euler_moments
from Samplers.ConditionalOracleSampler import sample_conditional_oracle
from Samplers.ExactBridgeSampler import sample_bridge_exact
from Samplers.ExactZSampler import sample_z
from Samplers.IntegralBridgeSampler import sample_bridge_integral
from Samplers.RandomStreams import derived_seed
from Utilities.BridgeErrors import BridgeError, ConfigError, DomainError
from Verify.MomentSummary import estimate_moments, compare_to_law, \
    compare_ensembles
from Verify.VerifyReport import VerifyReport

from abc import ABC, abstractmethod
from scipy.stats import norm

import logging
import numpy as np

"""
Verification suites. Each suite runs a family of checks on one model and
returns a VerifyReport:

    identities    algebraic identities between the kernels
    samplers      law equality of all bridge samplers with the conditional
                  law, Euler weak order
    conditioning  conditional laws of Z given Z_T = b against the bridge
                  kernels, transition density checks
    onedim        scalar closed forms against the general machinery, time
                  change sampling
    evolution     cocycle, inverse, derivative and series properties of E

Negative controls (VERIFY.CONTROL) deliberately break one ingredient so that
the suite must fail: kernel_scale (identities), endpoint_shift
(conditioning), variance_scale (samplers).
"""

logger = logging.getLogger(__name__)

SUITE_DEFAULTS = {'k_sigma': 4.0,
                  'paths': 100000,
                  'steps': 2048,
                  'times': 8,
                  'pairs': 4,
                  'tol': 1e-7,
                  'seed': 0,
                  'retry': True,
                  'threads': None}

SMALL_ENSEMBLE = 1000

ANALYTIC_TOL = 1e-8
ORACLE_TOL = 1e-10
DENSITY_TOL = 1e-8
QUADRATURE_CHECK_TOL = 1e-6

WEAK_ORDER_STEPS = (32, 64, 128, 256, 512, 1024)
WEAK_ORDER_SLACK = 0.3

FD_STEP = 1e-4
DERIVATIVE_TOL = 1e-5
SERIES_TERMS = 24
SERIES_TOL = 1e-8


class ScaledKappaKernel(BridgeKernel):
    """
    A kernel whose kappa is multiplied by a constant factor, the negative
    control of the identities suite.
    """

    def __init__(self, model, T, a, b, scale=1.0, **kwargs):
        self.scale = float(scale)
        super(ScaledKappaKernel, self).__init__(model, T, a, b, **kwargs)

    def kappa(self, s, t):
        return self.scale * super(ScaledKappaKernel, self).kappa(s, t)


class VerifySuite(ABC):
    """
    Abstract verification suite.
    """

    name = None
    statistical = False

    def __init__(self, model, config=None):
        """
        :param model: the LinearModel
        :param config: the run configuration (sections BRIDGE, NUMERICS,
                       SAMPLING, VERIFY)
        """
        self.model = model
        self.config = config or {}

        options = dict(SUITE_DEFAULTS)
        options.update({k: v for k, v in
                        (self.config.get('VERIFY') or {}).items()
                        if v is not None})
        self.options = options
        self.control = options.get('CONTROL') or {}

        for key in self.control:
            if key not in ('kernel_scale', 'endpoint_shift', 'variance_scale'):
                raise ConfigError('Unknown negative control: %s' % key)

        self.kernel = None

    def build_kernel(self):
        return BridgeKernel.from_config(self.model, self.config)

    @property
    def k_sigma(self):
        return float(self.options['k_sigma'])

    @property
    def n_paths(self):
        return int(self.options['paths'])

    def interior_times(self):
        T = self.kernel.T
        n = int(self.options['times'])
        return np.linspace(0.0, T, n + 2)[1:-1]

    def guarded(self, report, name, check):
        """
        Run one check; an exception becomes a failed check.
        """
        try:
            check()
        except (BridgeError, ValueError, ArithmeticError,
                np.linalg.LinAlgError) as e:
            logger.warning('Check %s raised %s', name, e)
            report.add_error(name, e)

    @abstractmethod
    def run_checks(self, report, seed):
        """
        Add the checks of the suite to the report.

        :param report: the VerifyReport
        :param seed: master seed of the statistical checks
        :return: nothing
        """
        pass

    def _attempt(self, seed):
        report = VerifyReport(self.name, self.model.model_hash(), seed)

        if self.kernel is None:
            try:
                self.kernel = self.build_kernel()
            except (BridgeError, ValueError, ArithmeticError) as e:
                report.add_error('kernel', e)
                return report

        self.guarded(report, self.name, lambda: self.run_checks(report, seed))
        return report

    def run(self):
        """
        Run the suite. A failed statistical suite is repeated once with a
        fresh seed and the retry is recorded in the report.

        :return: a VerifyReport
        """
        seed = int(self.options['seed'])

        if self.statistical and self.n_paths < SMALL_ENSEMBLE:
            logger.warning('%s suite with %d paths: standard error '
                           'thresholds are wide', self.name, self.n_paths)

        report = self._attempt(seed)
        if report.passed or not self.statistical or \
                not self.options['retry']:
            return report

        retry_seed = derived_seed(seed, 1)
        logger.warning('%s suite failed %d checks with seed %d, retrying '
                       'with seed %d', self.name, len(report.failures()),
                       seed, retry_seed)

        retry = self._attempt(retry_seed)
        retry.seed = seed
        retry.retried = True
        retry.retry_seed = retry_seed
        return retry


class IdentitiesSuite(VerifySuite):
    name = 'identities'

    def build_kernel(self):
        scale = self.control.get('kernel_scale')
        if scale is None:
            return super(IdentitiesSuite, self).build_kernel()

        return ScaledKappaKernel.from_config(self.model, self.config,
                                             scale=1.0 + float(scale))

    def run_checks(self, report, seed):
        T = self.kernel.T
        tol = float(self.options['tol'])
        grid = np.linspace(0.0, T, int(self.options['pairs']) + 1)[:-1]

        worst = {}
        for i, s in enumerate(grid):
            for t in grid[i + 1:]:
                for key, value in identity_residuals(self.kernel, s,
                                                     t).items():
                    worst[key] = max(worst.get(key, 0.0), value)

        for key, value in worst.items():
            report.add_check('identity:%s' % key, value, tol)


def comparison_times(T, n_times, n_steps, eps_pin=None):
    """
    Interior times spread over (0, T) that lie exactly on the Euler grid.
    """
    grid = sde_grid(T, n_steps, eps_pin)
    idx = np.rint(np.arange(1, n_times + 1) * (n_steps - 1) /
                  (n_times + 1)).astype(int)
    idx = np.unique(np.clip(idx, 1, n_steps - 1))
    return grid[idx]


def weak_order_slope(kernel, steps=WEAK_ORDER_STEPS):
    """
    The log-log slope of the Euler moment error at T/2 against the number of
    steps, from the exact moments of the scheme.

    :return: (slope, errors)
    """
    errors = []
    for n in steps:
        grid, means, covs = euler_moments(kernel, n)
        i = n // 2
        t = grid[i]
        errors.append(np.linalg.norm(means[i] -
                                     kernel.bridge_mean(kernel.a, 0.0, t)) +
                      np.linalg.norm(covs[i] - kernel.sigma_bridge(0.0, t)))

    slope = -np.polyfit(np.log(steps), np.log(errors), 1)[0]
    return float(slope), errors


class SamplersSuite(VerifySuite):
    name = 'samplers'
    statistical = True

    def run_checks(self, report, seed):
        kernel = self.kernel
        T = kernel.T
        steps = int(self.options['steps'])
        threads = self.options['threads']

        times = comparison_times(T, int(self.options['times']), steps)
        grid = np.concatenate([[0.0], times, [T]])

        law = conditional_fdd(kernel, times)
        if 'variance_scale' in self.control:
            law = GaussLaw(law.mean,
                           law.cov * (1.0 + float(
                               self.control['variance_scale'])))

        def compare(prefix, ensemble):
            compare_to_law(estimate_moments(ensemble.restrict(times)), law,
                           self.k_sigma, prefix=prefix, report=report)

        def exact():
            ensemble = sample_bridge_exact(kernel, grid, self.n_paths,
                                           derived_seed(seed, 10), threads)
            compare('exact:', ensemble)
            report.add_check('exact:endpoint',
                             float(np.abs(ensemble.at(T) - kernel.b).max()),
                             0.0)

        samplers = [
            ('exact', exact),
            ('sde', lambda: compare('sde:', sample_bridge_sde(
                kernel, steps, self.n_paths, derived_seed(seed, 11),
                threads=threads, keep=times))),
            ('anticipative', lambda: compare(
                'anticipative:', sample_bridge_anticipative(
                    kernel, grid, self.n_paths, derived_seed(seed, 12),
                    threads))),
            ('integral', lambda: compare('integral:', sample_bridge_integral(
                kernel, grid, self.n_paths, derived_seed(seed, 13),
                threads))),
            ('oracle', lambda: compare('oracle:', sample_conditional_oracle(
                kernel, times, self.n_paths, derived_seed(seed, 14),
                threads))),
        ]

        for name, check in samplers:
            self.guarded(report, name, check)

        def weak_order():
            slope, _ = weak_order_slope(kernel)
            report.add_check('sde:weak_order', abs(slope - 1.0),
                             WEAK_ORDER_SLACK)

        self.guarded(report, 'sde:weak_order', weak_order)


def _brute_conditional(kernel, s, t):
    """
    The law of (Z_s, Z_t) given Z_T = b by the Schur complement of the
    assembled 3 x 3 block covariance.
    """
    d = kernel.d
    times = [s, t, kernel.T]

    mean = np.concatenate([kernel.mean_forward(kernel.a, 0.0, u)
                           for u in times])
    cov = np.zeros((3 * d, 3 * d))
    for i in range(3):
        for j in range(i, 3):
            block = kernel.cov_z(times[i], times[j])
            cov[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
            cov[j * d:(j + 1) * d, i * d:(i + 1) * d] = block.T

    free = slice(0, 2 * d)
    end = slice(2 * d, 3 * d)
    gain = np.linalg.solve(cov[end, end], cov[free, end].T).T
    return mean[free] + gain @ (kernel.b - mean[end]), \
        cov[free, free] - gain @ cov[free, end].T


class ConditioningSuite(VerifySuite):
    name = 'conditioning'

    def run_checks(self, report, seed):
        kernel = self.kernel
        d = kernel.d
        a = kernel.a
        times = self.interior_times()

        conditioned = kernel
        if 'endpoint_shift' in self.control:
            shift = float(self.control['endpoint_shift'])
            conditioned = kernel.with_endpoints(a, kernel.b + shift)

        single_mean, single_cov = 0.0, 0.0
        for t in times:
            law = conditional_fdd(conditioned, [t])
            single_mean = max(single_mean, relative_residual(
                law.mean, kernel.bridge_mean(a, 0.0, t)))
            single_cov = max(single_cov, relative_residual(
                law.cov, kernel.sigma_bridge(0.0, t)))

        report.add_check('single:mean', single_mean, ANALYTIC_TOL)
        report.add_check('single:cov', single_cov, ANALYTIC_TOL)

        cross, oracle_mean, oracle_cov = 0.0, 0.0, 0.0
        for s, t in zip(times[:-1], times[1:]):
            law = conditional_fdd(conditioned, [s, t])
            cross = max(cross, relative_residual(law.cov[:d, d:],
                                                 kernel.cov_bridge(s, t)))
            mean, cov = _brute_conditional(kernel, s, t)
            oracle_mean = max(oracle_mean, relative_residual(law.mean, mean))
            oracle_cov = max(oracle_cov, relative_residual(law.cov, cov))

        report.add_check('pair:cross_cov', cross, ANALYTIC_TOL)
        report.add_check('pair:oracle_mean', oracle_mean, ORACLE_TOL)
        report.add_check('pair:oracle_cov', oracle_cov, ORACLE_TOL)

        self.guarded(report, 'density', lambda: self.density_checks(report))

    def density_checks(self, report):
        kernel = self.kernel
        T = kernel.T
        s, u, t = 0.25 * T, 0.5 * T, 0.75 * T

        x = kernel.bridge_mean(kernel.a, 0.0, s)
        y = kernel.bridge_mean(x, s, t) + \
            0.5 * np.sqrt(np.diag(kernel.sigma_bridge(s, t)))

        gaussian = transition_density_bridge(kernel, x, y, s, t,
                                             check=False)[0]
        ratio = bridge_density_ratio(kernel, x, y, s, t)[0]
        report.add_check('density:ratio_route',
                         abs(gaussian - ratio) / abs(ratio), DENSITY_TOL)

        if kernel.d != 1:
            return

        quad = GaussLegendre(order=20, rtol=1e-12, atol=1e-15)
        x0, y0 = float(x[0]), float(y[0])

        # Chapman-Kolmogorov through the intermediate time u
        A1, c1, S1 = kernel.bridge_transition(s, u)
        A2, c2, S2 = kernel.bridge_transition(u, t)
        m1 = float(A1[0, 0] * x0 + c1[0])
        sd1, sd2 = np.sqrt(S1[0, 0]), np.sqrt(S2[0, 0])

        def chapman(zs):
            return (norm.pdf(zs, m1, sd1) *
                    norm.pdf(y0, A2[0, 0] * zs + c2[0], sd2))[:, None, None]

        value = quad.integrate(chapman, m1 - 10 * sd1, m1 + 10 * sd1)[0, 0]
        report.add_check('density:chapman_kolmogorov',
                         abs(value - gaussian) / gaussian,
                         QUADRATURE_CHECK_TOL)

        # h(s, x) = int p_{s,t}(x, z) h(t, z) dz
        mz = float(kernel.mean_forward(x, s, t)[0])
        sdz = np.sqrt(kernel.kappa(s, t)[0, 0])
        E_Tt = kernel.evolve(t, T)[0, 0]
        c_tT = float(kernel.mean_forward(np.zeros(1), t, T)[0])
        sd_tT = np.sqrt(kernel.kappa(t, T)[0, 0])
        b = float(kernel.b[0])

        def harmonic(zs):
            return (norm.pdf(zs, mz, sdz) *
                    norm.pdf(b, E_Tt * zs + c_tT, sd_tT))[:, None, None]

        value = quad.integrate(harmonic, mz - 10 * sdz, mz + 10 * sdz)[0, 0]
        target = h_function(kernel, s, x)
        report.add_check('density:h_harmonic', abs(value - target) / target,
                         QUADRATURE_CHECK_TOL)


def _rel(x, y):
    return relative_residual(np.atleast_1d(np.asarray(x, dtype=float)),
                             np.atleast_1d(np.asarray(y, dtype=float)))


class OneDimSuite(VerifySuite):
    name = 'onedim'
    statistical = True

    def run_checks(self, report, seed):
        kernel = self.kernel
        if kernel.d != 1 or self.model.p != 1:
            raise DomainError('The onedim suite needs a model with d = p = 1')

        T = kernel.T
        a, b = float(kernel.a[0]), float(kernel.b[0])
        m = ScalarModel.from_linear_model(self.model, probe_horizon=T)
        times = self.interior_times()
        pairs = [(0.0, t) for t in times] + list(zip(times[:-1], times[1:]))

        worst = {}

        def record(key, value):
            worst[key] = max(worst.get(key, 0.0), value)

        for s, t in pairs:
            record('scalar:gamma', _rel(gamma_1d(m, s, t),
                                        kernel.kappa(s, t)))
            record('scalar:sigma', _rel(sigma_1d(m, s, t, T),
                                        kernel.sigma_bridge(s, t)))
            record('scalar:mean', _rel(n_ab_1d(m, a, b, s, t, T),
                                       kernel.bridge_mean(kernel.a, s, t)))

        for t in times:
            forms = anticipative_1d_forms(m, a, b, T, t)
            A, C = anticipative_coefficients(kernel, t)
            gamma_form = forms['gamma']
            record('scalar:anticipative',
                   _rel([gamma_form['coef_a'], gamma_form['coef_b']],
                        [A[0, 0], C[0, 0]]))
            for name, form in forms.items():
                record('scalar:anticipative_forms',
                       _rel(list(form.values()), list(gamma_form.values())))

            integral = integral_1d_coeffs(m, a, b, T, t)
            record('scalar:integral_mean',
                   _rel(integral['coef_a'] * a + integral['coef_b'] * b +
                        integral['offset'],
                        kernel.bridge_mean(kernel.a, 0.0, t)))
            us = np.array([0.0, 0.5 * t])
            G_tT = kernel.gamma(t, T)
            expected = [(G_tT @ kernel.gamma_inv(u) @
                         self.model.S.evaluate(u))[0, 0] for u in us]
            record('scalar:integral_kernel',
                   _rel(integral['kernel'](us), expected))

            self.martingale(m, a, b, T, t, forms['gamma'], integral, record)

        self.closed_forms(m, a, b, T, times, record)

        for key, value in worst.items():
            tol = ORACLE_TOL if key.startswith('martingale') else \
                (1e-12 if key.endswith('sign') else ANALYTIC_TOL)
            report.add_check(key, value, tol)

        self.guarded(report, 'lamperti',
                     lambda: self.lamperti(report, seed, times))

    def martingale(self, m, a, b, T, t, gamma_form, integral, record):
        if m.has_forcing():
            return

        forms = martingale_bridge_forms(m, a, b, T, t)
        scale = np.exp(m.qbar(t))
        anticipative = forms['anticipative_coeffs']
        record('martingale:anticipative',
               _rel([scale * anticipative[k] for k in sorted(anticipative)],
                    [gamma_form[k] for k in sorted(anticipative)]))
        record('martingale:integral',
               _rel([scale * forms['integral_coeffs']['coef_a'],
                     scale * forms['integral_coeffs']['coef_b']],
                    [integral['coef_a'], integral['coef_b']]))
        us = np.array([0.0, 0.5 * t])
        record('martingale:integral_kernel',
               _rel(scale * forms['integral_kernel'](us),
                    integral['kernel'](us)))
        record('martingale:quadratic_variation',
               _rel(forms['M_qv'], lamperti_time_change(m, t)))

    def closed_forms(self, m, a, b, T, times, record):
        if not m.is_constant() or m.has_forcing():
            return

        kernel = self.kernel
        q = float(m.q.evaluate(0.0)[0, 0])
        sigma = float(m.sigma.evaluate(0.0)[0, 0])

        if q == 0:
            bundles = [wiener_bridge(sigma, a, b, T)]
        else:
            bundles = [ou_bridge(q, sigma, a, b, T),
                       ou_bridge(-q, sigma, a, b, T)]

        closed = bundles[0]
        for s, t in zip(np.concatenate([[0.0], times[:-1]]), times):
            record('closed:mean', _rel(closed.mean(t),
                                       kernel.bridge_mean(kernel.a, 0.0, t)))
            record('closed:var', _rel(closed.var(s, t),
                                      kernel.sigma_bridge(s, t)))
            B, beta = kernel.bridge_drift(t)
            record('closed:drift', _rel(closed.sde_drift(t, a),
                                        B[0, 0] * a + beta[0]))
            record('closed:integral_coeff',
                   _rel(closed.integral_coeff(s, t),
                        (kernel.gamma(t, T) @ kernel.gamma_inv(s))[0, 0] *
                        sigma))

            if len(bundles) == 2:
                mirror = bundles[1]
                record('closed:sign', max(
                    abs(closed.mean(t) - mirror.mean(t)),
                    abs(closed.var(s, t) - mirror.var(s, t)),
                    abs(closed.sde_drift(t, a) - mirror.sde_drift(t, a)),
                    abs(closed.integral_coeff(s, t) -
                        mirror.integral_coeff(s, t))))

    def lamperti(self, report, seed, times):
        kernel = self.kernel
        threads = self.options['threads']
        grid = np.concatenate([[0.0], times])

        changed = sample_lamperti_z(kernel, kernel.a, grid, self.n_paths,
                                    derived_seed(seed, 20), threads)
        exact = sample_z(kernel, kernel.a, grid, self.n_paths,
                         derived_seed(seed, 21), threads)
        compare_ensembles(estimate_moments(changed), estimate_moments(exact),
                          self.k_sigma, prefix='lamperti:', report=report)


class EvolutionSuite(VerifySuite):
    name = 'evolution'

    def fd_times(self):
        """
        Interior times whose difference stencil avoids the table knots.
        """
        T = self.kernel.T
        knots = []
        for coeff in (self.model.Q, self.model.r, self.model.S):
            if coeff.kind == 'table':
                knots.extend(coeff.knots)
        knots = np.asarray(knots)

        times = T * np.array([0.21, 0.43, 0.67, 0.89])
        return [t for t in times
                if not np.any(np.abs(knots - t) < 10 * FD_STEP)]

    def run_checks(self, report, seed):
        kernel = self.kernel
        E = kernel.evolve
        d = kernel.d
        T = kernel.T
        Q = self.model.Q
        grid = np.linspace(0.0, T, 5)

        cocycle, inverse = 0.0, 0.0
        for i, s in enumerate(grid):
            for j in range(i + 1, len(grid)):
                t = grid[j]
                inverse = max(inverse,
                              relative_residual(E(t, s) @ E(s, t),
                                                np.eye(d)))
                for u in grid[i + 1:j]:
                    cocycle = max(cocycle,
                                  relative_residual(E(u, t) @ E(s, u),
                                                    E(s, t)))

        report.add_check('evolution:cocycle', cocycle, ANALYTIC_TOL)
        report.add_check('evolution:inverse', inverse, ANALYTIC_TOL)

        h = FD_STEP
        forward, backward = 0.0, 0.0
        times = self.fd_times()
        for t in times:
            for s in times:
                dt = (E(s, t + h) - E(s, t - h)) / (2 * h)
                forward = max(forward, relative_residual(
                    dt, Q.evaluate(t) @ E(s, t)))
                ds = (E(s + h, t) - E(s - h, t)) / (2 * h)
                backward = max(backward, relative_residual(
                    ds, -E(s, t) @ Q.evaluate(s)))

        report.add_check('evolution:derivative_t', forward, DERIVATIVE_TOL)
        report.add_check('evolution:derivative_s', backward, DERIVATIVE_TOL)

        series, growth = 0.0, 0.0
        evolution = kernel.evolution
        for t in grid[1:]:
            series = max(series, relative_residual(
                evolution.evolve_series(0.0, t, terms=SERIES_TERMS,
                                        nodes=SERIES_TERMS), E(0.0, t)))
            growth = max(growth, np.linalg.norm(E(0.0, t), 2) /
                         evolution.growth_bound(0.0, t))

        report.add_check('evolution:series', series, SERIES_TOL)
        report.add_check('evolution:growth_bound', growth, 1.0 + 1e-8)


SUITES = {'identities': IdentitiesSuite,
          'samplers': SamplersSuite,
          'conditioning': ConditioningSuite,
          'onedim': OneDimSuite,
          'evolution': EvolutionSuite}


def run_suite(name, model, config=None):
    """
    Run a verification suite.

    :param name: one of identities, samplers, conditioning, onedim, evolution
    :param model: the LinearModel
    :param config: the run configuration
    :return: a VerifyReport
    """
    if name not in SUITES:
        raise ConfigError('Unknown verification suite: %s' % name)

    report = SUITES[name](model, config).run()
    logger.info('Suite %s: %s with %d checks', name,
                'pass' if report.passed else 'fail', len(report.checks))
    return report
