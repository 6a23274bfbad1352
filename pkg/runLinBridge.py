"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Densities.TransitionDensity import transition_density_z, \
    transition_density_bridge
from Kernels.BridgeKernel import BridgeKernel
from Kernels.Controllability import controllability_check
from Model.ModelFile import load_model
from OneDim.Lamperti import sample_lamperti_z
from Samplers.AnticipativeSampler import sample_bridge_anticipative
from Samplers.BridgeSDESampler import sample_bridge_sde
from Samplers.ConditionalOracleSampler import sample_conditional_oracle
from Samplers.ExactBridgeSampler import sample_bridge_exact
from Samplers.ExactZSampler import sample_z
from Samplers.IntegralBridgeSampler import sample_bridge_integral
from Utilities.BridgeErrors import BridgeError, ConfigError
from Utilities.EnsembleRecorder import EnsembleRecorder, write_table, \
    header_lines
from Verify.VerifySuite import SUITES, run_suite

from copy import deepcopy

import argparse
import logging
import os.path
import sys

import numpy as np
import pandas as pd
import yaml

"""
This is the main entry point to LinBridge.

The Controller runs one command on a run configuration. A run configuration
is assembled from the defaults below, an optional YAML file (--config) and
the command line flags, in that order of precedence.
"""

logger = logging.getLogger('runLinBridge')

COMMANDS = ('kernels', 'sample', 'density', 'verify', 'controllability')

DEFAULTS = {
    'GENERAL': {'command': None,
                'model': 'Model/Models/ou.yaml',
                'threads': None,
                'log_level': 'WARNING',
                'expect': 0},
    'BRIDGE': {'T': 1.0, 'a': None, 'b': None},
    'NUMERICS': {'ode_rtol': 1e-12,
                 'ode_atol': 1e-14,
                 'quad_rtol': 1e-10,
                 'quad_atol': 1e-14,
                 'horizon_eps': None,
                 'probe_points': 6},
    'SAMPLING': {'method': 'exact',
                 'grid': 11,
                 'paths': 1000,
                 'steps': 256,
                 'seed': 0,
                 'eps_pin': None,
                 'z0': None},
    'VERIFY': {'suite': 'identities',
               'k_sigma': 4.0,
               'paths': 100000,
               'steps': 2048,
               'times': 8,
               'pairs': 4,
               'tol': 1e-7,
               'seed': 0,
               'retry': True,
               'CONTROL': None},
    'CONTROLLABILITY': {'t0': 0.0, 'k_max': 3},
    'DENSITY': {'s': 0.25, 't': 0.5, 'x': None, 'y': None},
    'OUTPUT': {'path': None}
}

# Command line flag -> configuration entries it overrides
FLAG_TARGETS = {
    'model': [('GENERAL', 'model')],
    'threads': [('GENERAL', 'threads')],
    'log_level': [('GENERAL', 'log_level')],
    'T': [('BRIDGE', 'T')],
    'a': [('BRIDGE', 'a')],
    'b': [('BRIDGE', 'b')],
    'grid': [('SAMPLING', 'grid')],
    'method': [('SAMPLING', 'method')],
    'paths': [('SAMPLING', 'paths'), ('VERIFY', 'paths')],
    'steps': [('SAMPLING', 'steps'), ('VERIFY', 'steps')],
    'seed': [('SAMPLING', 'seed'), ('VERIFY', 'seed')],
    'eps_pin': [('SAMPLING', 'eps_pin')],
    'out': [('OUTPUT', 'path')],
    'tol': [('VERIFY', 'tol')],
    'suite': [('VERIFY', 'suite')],
    't0': [('CONTROLLABILITY', 't0')],
    'kmax': [('CONTROLLABILITY', 'k_max')],
    's': [('DENSITY', 's')],
    't': [('DENSITY', 't')],
    'x': [('DENSITY', 'x')],
    'y': [('DENSITY', 'y')],
}


def parse_vector(value, d, name):
    """
    A vector of length d from a comma separated string, a number or a list.
    None gives the origin.
    """
    if value is None:
        return np.zeros(d)

    if isinstance(value, str):
        try:
            value = [float(v) for v in value.split(',') if v.strip()]
        except ValueError:
            raise ConfigError('Unacceptable value for %s: %s ' % (name, value))

    vector = np.atleast_1d(np.asarray(value, dtype=float)).ravel()
    if len(vector) != d:
        raise ConfigError('%s must have length %d, got %d'
                          % (name, d, len(vector)))
    return vector


def parse_grid(value, T):
    """
    A time grid from a number of points (uniform on [0, T]) or an explicit
    list of times.
    """
    if isinstance(value, str):
        parts = [v.strip() for v in value.split(',') if v.strip()]
        try:
            if len(parts) == 1 and parts[0].lstrip('+-').isdigit():
                value = int(parts[0])
            else:
                value = [float(v) for v in parts]
        except ValueError:
            raise ConfigError('Unacceptable value for grid: %s ' % value)

    if isinstance(value, int):
        if value < 2:
            raise ConfigError('A grid needs at least 2 points, got %d'
                              % value)
        return np.linspace(0.0, T, value)

    grid = np.asarray(value, dtype=float).ravel()
    if len(grid) == 0 or np.any(grid < 0) or np.any(grid > T):
        raise ConfigError('Grid times must lie within [0, %g]' % T)
    return grid


def configure_logging(level):
    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise ConfigError('Unknown log level: %s' % level)

    logging.basicConfig(level=numeric, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(numeric)


def load_config(path):
    """
    Load a YAML run configuration.

    :param path: path to the file
    :return: a dictionary of sections
    """
    if not isinstance(path, str):
        raise ValueError('Unacceptable value for configuration file name: %s '
                         % path)

    if not os.path.isfile(path):
        raise FileNotFoundError('Configuration file %s not found' % path)

    if os.path.splitext(path)[1] not in ('.yaml', '.yml'):
        raise ConfigError('Unknown configuration file type: %s' % path)

    with open(path, 'r') as file:
        config = yaml.load(file, Loader=yaml.SafeLoader) or {}

    if not isinstance(config, dict):
        raise ConfigError('Configuration %s is not a mapping' % path)
    return config


def build_config(file_config=None, flags=None):
    """
    Merge the defaults, a configuration file and the command line flags.

    :return: the run configuration
    """
    config = deepcopy(DEFAULTS)

    for section, values in (file_config or {}).items():
        if section not in config:
            raise ConfigError('Unknown configuration section: %s' % section)
        if values:
            config[section].update(values)

    for flag, value in (flags or {}).items():
        if value is None or flag not in FLAG_TARGETS:
            continue
        for section, key in FLAG_TARGETS[flag]:
            config[section][key] = value

    config['VERIFY']['threads'] = config['GENERAL']['threads']
    return config


def provenance(config):
    """
    The configuration kept with outputs; the thread count does not change
    results and is left out.
    """
    config = deepcopy(config)
    config['GENERAL'].pop('threads', None)
    config['VERIFY'].pop('threads', None)
    return config


class Controller(object):
    """
    Runs the LinBridge commands. Every command returns a process exit code.
    """

    @staticmethod
    def prepare(config, kernel=True):
        """
        Load the model and resolve the bridge endpoints.

        :param config: the run configuration
        :param kernel: whether to build the bridge kernel
        :return: (model, kernel or None)
        """
        model = load_model(config['GENERAL']['model'])

        bridge = config['BRIDGE']
        bridge['T'] = float(bridge['T'])
        bridge['a'] = parse_vector(bridge['a'], model.d, 'a').tolist()
        bridge['b'] = parse_vector(bridge['b'], model.d, 'b').tolist()

        if not kernel:
            return model, None
        return model, BridgeKernel.from_config(model, config)

    @staticmethod
    def run_kernels(config):
        """
        Tables of kappa(0,t), Gamma(t,T), Sigma(0,t) and n_{a,b}(0,t).

        :param config: the run configuration
        :return: exit code
        """
        model, kernel = Controller.prepare(config)
        d = model.d
        T = kernel.T
        grid = parse_grid(config['SAMPLING']['grid'], T)

        rows = []
        for t in grid:
            row = {'t': t}
            matrices = (('kappa', kernel.kappa(0.0, t)),
                        ('gamma', kernel.gamma(t, T)),
                        ('sigma', kernel.sigma_bridge(0.0, t)))
            for name, matrix in matrices:
                for i in range(d):
                    for j in range(d):
                        row['%s_%d%d' % (name, i + 1, j + 1)] = matrix[i, j]
            n = kernel.bridge_mean(kernel.a, 0.0, t)
            for i in range(d):
                row['n_%d' % (i + 1)] = n[i]
            rows.append(row)

        header = header_lines(model_hash=model.model_hash(), T='%.17g' % T,
                              columns='t kappa(0,t) gamma(t,T) sigma(0,t) '
                                      'n_ab(0,t), row-major')
        write_table(pd.DataFrame(rows), config['OUTPUT']['path'], header)
        return 0

    @staticmethod
    def run_sample(config):
        """
        Sample a path ensemble and write it with its sidecar.

        :param config: the run configuration
        :return: exit code
        """
        model, kernel = Controller.prepare(config)
        sampling = config['SAMPLING']
        threads = config['GENERAL']['threads']
        method = sampling['method']
        n_paths = int(sampling['paths'])
        seed = int(sampling['seed'])
        record = provenance(config)

        grid = parse_grid(sampling['grid'], kernel.T)
        z0 = kernel.a if sampling['z0'] is None else \
            parse_vector(sampling['z0'], model.d, 'z0')

        if method == 'exact':
            ensemble = sample_bridge_exact(kernel, grid, n_paths, seed,
                                           threads, record)
        elif method == 'sde':
            ensemble = sample_bridge_sde(kernel, int(sampling['steps']),
                                         n_paths, seed, sampling['eps_pin'],
                                         threads, record)
        elif method == 'anticipative':
            ensemble = sample_bridge_anticipative(kernel, grid, n_paths, seed,
                                                  threads, record)
        elif method == 'integral':
            ensemble = sample_bridge_integral(kernel, grid, n_paths, seed,
                                              threads, record)
        elif method == 'z':
            ensemble = sample_z(kernel, z0, grid, n_paths, seed, threads,
                                record)
        elif method == 'lamperti':
            ensemble = sample_lamperti_z(kernel, z0, grid, n_paths, seed,
                                         threads, record)
        elif method == 'oracle':
            times = grid[(grid > 0) & (grid < kernel.T)]
            ensemble = sample_conditional_oracle(kernel, times, n_paths, seed,
                                                 threads, record)
        else:
            raise ConfigError('Unknown sampling method: %s' % method)

        recorder = EnsembleRecorder()
        recorder.record(ensemble)
        recorder.save(config['OUTPUT']['path'])
        return 0

    @staticmethod
    def run_density(config):
        """
        Print the transition densities of Z and of the bridge.

        :param config: the run configuration
        :return: exit code
        """
        model, kernel = Controller.prepare(config)
        density = config['DENSITY']
        s, t = float(density['s']), float(density['t'])

        x = kernel.bridge_mean(kernel.a, 0.0, s) if density['x'] is None \
            else parse_vector(density['x'], model.d, 'x')
        y = kernel.bridge_mean(x, s, t) if density['y'] is None \
            else parse_vector(density['y'], model.d, 'y')

        p_z, log_z = transition_density_z(kernel, x, y, s, t)
        p_u, log_u = transition_density_bridge(kernel, x, y, s, t)

        print('p_Z %.17g' % p_z)
        print('log_p_Z %.17g' % log_z)
        print('p_U %.17g' % p_u)
        print('log_p_U %.17g' % log_u)
        return 0

    @staticmethod
    def run_verify(config):
        """
        Run a verification suite and emit its JSON report.

        :param config: the run configuration
        :return: 0 if the suite passed, 1 otherwise
        """
        suite = config['VERIFY']['suite']
        if suite not in SUITES:
            raise ConfigError('Unknown verification suite: %s' % suite)

        model, _ = Controller.prepare(config, kernel=False)
        report = run_suite(suite, model, config)

        text = report.to_json() + '\n'
        path = config['OUTPUT']['path']
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, 'w') as file:
                file.write(text)

        return 0 if report.passed else 1

    @staticmethod
    def run_controllability(config):
        """
        Print the rank report of the controllability matrix.

        :param config: the run configuration
        :return: exit code
        """
        model = load_model(config['GENERAL']['model'])
        options = config['CONTROLLABILITY']
        result = controllability_check(model, float(options['t0']),
                                       int(options['k_max']))

        print('rank %d' % result['rank'])
        print('k_used %d' % result['k_used'])
        print('satisfied %s' % result['satisfied'])
        print('condition %s' % result['condition'])
        return 0


def arg_parse(args=None):
    """
    Parse the command line into a run configuration.

    :param args: the argument vector without the program name
    :return: a dictionary with the configuration and the test mode flag
    """
    parser = argparse.ArgumentParser(
        prog='runLinBridge.py',
        description='Bridges of linear Gauss-Markov SDEs: kernel tables, '
                    'sampling, densities, verification and controllability.')

    parser.add_argument('command', nargs='?', choices=COMMANDS)
    parser.add_argument('-t', dest='test_mode', action='store_true',
                        help='run every YAML configuration in Tests/')
    parser.add_argument('--config', help='YAML run configuration')
    parser.add_argument('--model', help='model file (Model/Models/ou.yaml)')
    parser.add_argument('--T', type=float, help='bridge horizon (1.0)')
    parser.add_argument('--a', help='start point, comma separated (origin)')
    parser.add_argument('--b', help='end point, comma separated (origin)')
    parser.add_argument('--grid', help='number of uniform points or a comma '
                                       'separated list of times (11)')
    parser.add_argument('--method', help='exact, sde, anticipative, '
                                         'integral, z, oracle or lamperti '
                                         '(exact)')
    parser.add_argument('--paths', type=int, help='number of paths (1000; '
                                                  '100000 for verify)')
    parser.add_argument('--steps', type=int, help='Euler steps (256; 2048 '
                                                  'for verify)')
    parser.add_argument('--seed', type=int, help='master seed (0)')
    parser.add_argument('--out', help='output file (stdout)')
    parser.add_argument('--tol', type=float, help='identity tolerance (1e-7)')
    parser.add_argument('--eps-pin', dest='eps_pin', type=float,
                        help='gap of the Euler grid before T (T/steps)')
    parser.add_argument('--suite', help='identities, samplers, conditioning, '
                                        'onedim or evolution (identities)')
    parser.add_argument('--t0', type=float, help='controllability time (0)')
    parser.add_argument('--kmax', type=int, help='controllability depth (3)')
    parser.add_argument('--threads', type=int, help='worker threads (all '
                                                    'cores)')
    parser.add_argument('--s', type=float, help='density start time (0.25)')
    parser.add_argument('--t', type=float, help='density end time (0.5)')
    parser.add_argument('--x', help='density start state (bridge mean)')
    parser.add_argument('--y', help='density end state (bridge mean)')
    parser.add_argument('--log-level', dest='log_level',
                        help='logging level (WARNING)')

    parsed = parser.parse_args(args)

    if parsed.test_mode:
        return {'test_mode': True}

    file_config = load_config(parsed.config) if parsed.config else {}
    config = build_config(file_config, vars(parsed))

    if parsed.command:
        config['GENERAL']['command'] = parsed.command
    if config['GENERAL']['command'] not in COMMANDS:
        raise ConfigError('Unknown or missing command: %s'
                          % config['GENERAL']['command'])

    return {'config': config, 'test_mode': False}


def run_controller(args):
    """
    Run the command of a parsed configuration.

    :param args: the output of arg_parse
    :return: exit code (0 success, 1 failed verification, 2 errors)
    """
    config = args['config']
    command = config['GENERAL']['command']

    logger.info('Running %s with model %s', command,
                config['GENERAL']['model'])

    try:
        return getattr(Controller, 'run_' + command)(config)

    except (BridgeError, ValueError, ArithmeticError, FileNotFoundError) \
            as err:
        sys.stderr.write('LinBridge error! %s: %s\n'
                         % (type(err).__name__, err))
        return 2


def run_tests(directory='Tests/'):
    """
    Run every YAML configuration in a directory. A configuration passes when
    its exit code equals GENERAL.expect (0 by default).

    :return: exit code
    """
    passed = []
    failed = []

    for config_file in sorted(os.listdir(directory)):
        if not config_file.endswith('.yaml'):
            continue

        print(f'\n\nRunning test with configuration {config_file}\n')

        try:
            args = arg_parse(['--config', os.path.join(directory,
                                                       config_file)])
            expected = args['config']['GENERAL']['expect']
            code = run_controller(args)
        except (BridgeError, ValueError, FileNotFoundError) as err:
            sys.stderr.write('LinBridge error! %s\n' % err)
            expected, code = 0, 2

        if code == expected:
            print('PASS!')
            passed.append(config_file)
        else:
            print(f'FAIL! With {config_file} (exit {code}, expected '
                  f'{expected})')
            failed.append(config_file)

    print('\nTEST RESULTS:')
    print(f'Passed {len(passed)} out of {(len(passed) + len(failed))}')
    print(f'Failed on: {failed}')
    return 0 if not failed else 1


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv

    try:
        arguments = arg_parse(argv)
        if arguments['test_mode']:
            configure_logging('WARNING')
            return run_tests()

        configure_logging(arguments['config']['GENERAL']['log_level'])
    except (BridgeError, ValueError, FileNotFoundError) as err:
        sys.stderr.write('LinBridge error! %s\n' % err)
        return 2

    return run_controller(arguments)


if __name__ == '__main__':
    """
    This is the main entry point to LinBridge.

    Usage:

    python runLinBridge.py <command> [--config <path_to_config.yaml>] [flags]

    (testing mode)
    python runLinBridge.py -t
    """
    sys.exit(main())
