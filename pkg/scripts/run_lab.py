#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: run_lab.py
Description: Runs the pointer-decoherence experiments.

Usage:
    run_lab.py measure [options]
    run_lab.py decoherence [options]
    run_lab.py gap [options]
    run_lab.py recurrence [options]
    run_lab.py counterexample [options]
    run_lab.py validate [options]
    run_lab.py (-h | --help)

Options:
    -h, --help         Show this screen and exit.
    --seed <seed>      64-bit seed for every random draw.
    --out <dir>        Output directory.
    --format <list>    Comma-separated subset of csv,json,svg.
    --config <file>    YAML file overriding the packaged defaults.
    --M <list>         Microstates per pointer branch, comma-separated.
    --K <list>         Number of measurement outcomes, comma-separated.
    --c <list>         Object amplitudes, e.g. 0.6,0.8j (normalised if nearly unit).
    --trials <n>       Number of random trials.
    --restarts <n>     Optimizer restarts for the accessible-information search.
    --margins <list>   S drop and I rise margins in bits, e.g. 0.01,0.01.
    --horizon <t>      Largest scan time for recurrence runs.
    --draws <n>        Phase draws per M for decoherence runs.
    --source <name>    gap state source: reduced, exact or random-bipartite.
    --p-mode <name>    Microstate weights: uniform or dirichlet.
    --strategy <name>  pointer-exact, projective-search or hybrid.
    --mode <name>      recurrence energies: incommensurate or commensurate.
    --fault <name>     Inject a fault into the validation suite (coherent-phases).
    --timing           Add a wall_time column to sweep tables.
    --no-mp            Run all sweep points in this process.
"""

import sys

from docopt import docopt

from pointer_decoherence.config import COMMANDS, load_experiment_config, parse_cli_overrides
from pointer_decoherence.experiments import (run_measure, run_decoherence, run_gap, run_recurrence,
                                             run_counterexample)
from pointer_decoherence.checks import run_validate
from pointer_decoherence.utils import print_bad


RUNNERS = dict(measure=run_measure,
               decoherence=run_decoherence,
               gap=run_gap,
               recurrence=run_recurrence,
               counterexample=run_counterexample,
               validate=run_validate)


def main(args):
    command = [c for c in COMMANDS if args[c]][0]

    try:
        config = load_experiment_config(command, parse_cli_overrides(args), args['--config'])
        status = RUNNERS[command](config)
    except ValueError as e:
        print_bad("{c}: {e}".format(c=command, e=e))
        return 2

    return status


if __name__ == '__main__':
    args = docopt(__doc__)

    sys.exit(main(args))
