"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

from concurrent.futures import ThreadPoolExecutor

import logging
import os
import numpy as np

"""
Reproducible random streams for parallel path generation. Paths are split in
fixed blocks of BLOCK_SIZE; block j draws from a Philox generator seeded with
SeedSequence(seed, spawn_key=(j,)). Which thread runs a block does not change
its numbers, so results are identical for any number of threads.
"""

logger = logging.getLogger(__name__)

BLOCK_SIZE = 4096
THREADS_ENV = 'LINBRIDGE_THREADS'


def check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool) \
            or seed < 0:
        raise ValueError('Unacceptable value for seed: %s ' % seed)
    return int(seed)


def block_generator(seed, block):
    """
    The generator of a block of paths.

    :param seed: master seed
    :param block: block index
    :return: a numpy Generator
    """
    sequence = np.random.SeedSequence(check_seed(seed), spawn_key=(block,))
    return np.random.Generator(np.random.Philox(sequence))


def derived_seed(seed, tag):
    """
    An independent master seed for a tagged sub-experiment of a run.
    """
    sequence = np.random.SeedSequence([check_seed(seed), int(tag)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def stream_ids(n_paths):
    """
    Stream (block) index of every path.
    """
    return np.arange(n_paths) // BLOCK_SIZE


def resolve_threads(threads=None, n_blocks=None):
    """
    Number of worker threads: the requested number (all cores if None),
    capped by the LINBRIDGE_THREADS environment variable and by the number
    of blocks.
    """
    if threads is None:
        threads = os.cpu_count() or 1

    if threads < 1:
        raise ValueError('Unacceptable value for threads: %s ' % threads)

    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            threads = min(threads, max(1, int(cap)))
        except ValueError:
            logger.warning('Ignoring %s=%s', THREADS_ENV, cap)

    if n_blocks is not None:
        threads = min(threads, max(1, n_blocks))

    return threads


def run_blocks(n_paths, seed, fill, threads=None):
    """
    Call fill(rng, start, stop) for every block of paths.

    :param n_paths: total number of paths
    :param seed: master seed
    :param fill: callable writing paths [start, stop) of the output
    :param threads: worker threads
    :return: nothing
    """
    seed = check_seed(seed)
    n_blocks = (n_paths + BLOCK_SIZE - 1) // BLOCK_SIZE
    blocks = [(j, j * BLOCK_SIZE, min(n_paths, (j + 1) * BLOCK_SIZE))
              for j in range(n_blocks)]

    def task(block):
        j, start, stop = block
        fill(block_generator(seed, j), start, stop)

    threads = resolve_threads(threads, n_blocks)
    if threads == 1:
        for block in blocks:
            task(block)
        return

    with ThreadPoolExecutor(max_workers=threads) as pool:
        # list() re-raises the first worker exception
        list(pool.map(task, blocks))
