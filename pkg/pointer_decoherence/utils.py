#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: utils.py
Description: pointer_decoherence helper functions: console colours, tables,
             seeding, resource reporting.
"""

import math
import os

from datetime import datetime as dt

import numpy as np
import psutil

from tabulate import tabulate


def print_good(string, **kwargs):
    """print string in green
    """
    okgreen = '\033[92m'
    reset = '\033[39m'

    print(okgreen + string + reset, **kwargs)


def print_warn(string, **kwargs):
    """print string in yellow
    """
    warnyellow = '\033[93m'
    reset = '\033[39m'

    print(warnyellow + string + reset, **kwargs)


def print_bad(string, **kwargs):
    """print string in red
    """
    badred = '\033[91m'
    reset = '\033[39m'

    print(badred + string + reset, **kwargs)


def dataframe_to_table(dataframe, tablefmt='simple'):
    """Format a results dataframe for the console
    """
    return tabulate(dataframe, headers='keys', tablefmt=tablefmt, floatfmt='.6g', showindex=False)


def seed_sequence(seed, *key):
    """Stream for the sub-task addressed by the integer path `key`.

    SeedSequence(seed, spawn_key=key) depends only on (seed, key), never on how
    many other streams were drawn or in which process, which is what makes
    parallel sweeps reproducible.
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + tuple(key))
    return np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))


def make_rng(seed, *key):
    """PCG64 generator for seed_sequence(seed, *key)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *key)))


def get_suitable_ncores():
    return min(os.cpu_count(), 1 + int(os.cpu_count() * 0.5))


def bytes_human_readable(n):
    if (n == 0):
        return '0B'
    div = 10 ** 3
    exp = int(math.log(n, div))
    suffix = ['B', 'KB', 'MB', 'GB', 'TB', 'PB', 'EB'][exp]
    signif = '%.1f' % (n / (div ** exp))

    return(signif + suffix)


def memory_usage():
    process = psutil.Process(os.getpid())
    return bytes_human_readable(process.memory_info().rss)


def elapsed_since(t_start):
    return str(dt.now() - t_start).split('.')[0]
