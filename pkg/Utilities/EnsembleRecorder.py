"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from Samplers.PathEnsemble import PathEnsemble
from Samplers.RandomStreams import stream_ids

import json
import logging
import os
import sys

import numpy as np
import pandas as pd

"""
The EnsembleRecorder writes path ensembles to CSV files and reads them back.

The CSV starts with '#' header lines (version, model hash, method, seed)
followed by the table path,t,x1,...,xd with one row per path and time and
floats printed with 17 significant digits. A JSON sidecar <file>.meta.json
holds the rest of the provenance (grid, endpoints, configuration).
"""

logger = logging.getLogger(__name__)

LINBRIDGE_VERSION = '1.0.0'
FLOAT_FORMAT = '%.17g'


def header_lines(**fields):
    """
    The '#' comment lines of an output table.
    """
    lines = ['# linbridge %s' % LINBRIDGE_VERSION]
    lines += ['# %s %s' % (key, value) for key, value in fields.items()]
    return lines


def write_table(frame, path=None, header=None):
    """
    Write a data frame as CSV with comment header lines, to stdout if path
    is None.

    :param frame: a pandas DataFrame
    :param path: the output file
    :param header: list of comment lines
    :return: nothing
    """
    text = '\n'.join(header or []) + ('\n' if header else '') + \
        frame.to_csv(index=False, float_format=FLOAT_FORMAT,
                     lineterminator='\n')

    if path is None:
        sys.stdout.write(text)
        return

    try:
        with open(path, 'w', newline='') as file:
            file.write(text)
    except IOError:
        raise IOError('Ensemble Recorder I/O Error when attempting to write '
                      '%s' % path)


def read_header(path):
    """
    The key/value pairs of the '#' header lines of a table.
    """
    fields = {}
    with open(path) as file:
        for line in file:
            if not line.startswith('#'):
                break
            parts = line[1:].strip().split(None, 1)
            if len(parts) == 2:
                fields[parts[0]] = parts[1]
    return fields


def meta_path(path):
    return path + '.meta.json'


class EnsembleRecorder:
    """
    Saves and loads path ensembles.
    """

    def __init__(self, path=None):
        """
        :param path: path to save / load the ensemble
        """
        self.path = path
        self.ensemble = None

    def set_path(self, path):
        """
        Sets the path

        :param path: the new path
        :return: nothing
        """
        self.path = path

    def record(self, ensemble):
        if self.ensemble is not None:
            logger.warning('Ensemble Recorder is not empty! Replacing the '
                           'recorded ensemble.')
        self.ensemble = ensemble

    def to_frame(self, ensemble=None):
        ensemble = ensemble or self.ensemble
        n, m, d = ensemble.states.shape

        frame = pd.DataFrame({'path': np.repeat(np.arange(n), m),
                              't': np.tile(ensemble.grid, n)})
        values = ensemble.states.reshape(n * m, d)
        for k in range(d):
            frame['x%d' % (k + 1)] = values[:, k]
        return frame

    def save(self, path=None):
        """
        Saves the recorded ensemble and its sidecar. Without a path the
        table goes to stdout and no sidecar is written.

        :param path: the file path to be saved
        :return: nothing
        """
        if self.ensemble is None:
            raise ValueError('Ensemble Recorder has nothing to save')

        if not path:
            path = self.path

        e = self.ensemble
        header = header_lines(model_hash=e.model_hash, method=e.method,
                              seed=e.seed)
        write_table(self.to_frame(), path, header)

        if path is None:
            return

        with open(meta_path(path), 'w') as file:
            json.dump(e.metadata(), file, indent=2, sort_keys=True)
            file.write('\n')

        logger.info('Saved %d paths to %s', e.n_paths, path)

    def load(self, path=None):
        """
        Loads an ensemble from a CSV file (and its sidecar if present).

        :param path: the path to load the ensemble from
        :return: the PathEnsemble
        """
        if not path:
            path = self.path

        if not isinstance(path, str):
            raise ValueError('Unacceptable value for Ensemble Recorder file '
                             'name: %s ' % path)

        if not os.path.isfile(path):
            raise FileNotFoundError('Ensemble file %s not found' % path)

        header = read_header(path)
        frame = pd.read_csv(path, comment='#', float_precision='round_trip')

        columns = [c for c in frame.columns if c.startswith('x')]
        n_paths = int(frame['path'].max()) + 1 if len(frame) else 0
        grid = frame.loc[frame['path'] == 0, 't'].to_numpy()
        states = frame[columns].to_numpy().reshape(n_paths, len(grid),
                                                   len(columns))

        meta = {}
        if os.path.isfile(meta_path(path)):
            with open(meta_path(path)) as file:
                meta = json.load(file)
        else:
            logger.warning('No sidecar for %s, provenance is partial', path)

        seed = int(header['seed']) if 'seed' in header else meta.get('seed')
        self.ensemble = PathEnsemble(grid, states, header.get('method'),
                                     seed, stream_ids(n_paths),
                                     header.get('model_hash'),
                                     T=meta.get('T'), a=meta.get('a'),
                                     b=meta.get('b'),
                                     config=meta.get('config'))
        return self.ensemble
