#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: test_config.py
Description: Tests for pointer_decoherence.config
"""

import os
import tempfile
import unittest

import yaml

from pointer_decoherence.config import (COMMANDS, ExperimentConfig, get_config, set_config, reset_config,
                                        load_config_file, load_experiment_config, merge_dicts, parse_list,
                                        parse_cli_overrides)


def docopt_args(**flags):
    """What docopt hands main() when only `flags` are given."""
    args = {c: False for c in COMMANDS}
    for name in ['--seed', '--out', '--format', '--config', '--M', '--K', '--c', '--trials', '--restarts',
                 '--margins', '--horizon', '--draws', '--source', '--p-mode', '--strategy', '--mode', '--fault']:
        args[name] = None
    args['--timing'] = args['--no-mp'] = False
    args.update(flags)
    return args


class TestConfig(unittest.TestCase):
    """Test the layered configuration"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        reset_config()
        self.tmp.cleanup()

    def write_yaml(self, data, name='override.yaml'):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            if isinstance(data, str):
                f.write(data)
            else:
                yaml.safe_dump(data, f)
        return path

    def test_defaults(self):
        self.assertEqual(get_config(['common', 'seed']), 20120501)
        config = load_experiment_config('gap', verbose=False)
        self.assertIsInstance(config, ExperimentConfig)
        self.assertEqual(config.seed, 20120501)
        self.assertEqual(config.formats, ('csv', 'json', 'svg'))
        self.assertEqual(config.output_dir, 'results')
        self.assertEqual(config.get('restarts'), 32)
        self.assertEqual(config.get('maxiter'), 500)
        self.assertEqual(config.get('tol'), 1e-9)
        self.assertNotIn('seed', config.params)
        self.assertEqual(config.to_dict()['command'], 'gap')

    def test_search_defaults(self):
        validate = load_experiment_config('validate', verbose=False)
        self.assertEqual((validate.get('restarts'), validate.get('maxiter')), (32, 500))
        self.assertGreater(load_experiment_config('measure', verbose=False).get('restarts'), 2)

    def test_every_command_loads(self):
        for command in COMMANDS:
            self.assertEqual(load_experiment_config(command, verbose=False).command, command)

    def test_get_config_copies(self):
        grid = get_config(['gap', 'M'])
        grid.append(1000)
        self.assertEqual(get_config(['gap', 'M']), [1, 2, 4, 8])

    def test_set_config(self):
        set_config(['gap', 'restarts'], 11)
        self.assertEqual(load_experiment_config('gap', verbose=False).get('restarts'), 11)
        reset_config()
        self.assertEqual(load_experiment_config('gap', verbose=False).get('restarts'), 32)

    def test_precedence(self):
        path = self.write_yaml(dict(common=dict(restarts=9, output_dir='elsewhere'), gap=dict(restarts=7)))
        self.assertEqual(load_experiment_config('gap', config_file=path, verbose=False).get('restarts'), 7)
        config = load_experiment_config('counterexample', config_file=path, verbose=False)
        self.assertEqual(config.get('restarts'), 9)
        self.assertEqual(config.output_dir, 'elsewhere')

        config = load_experiment_config('gap', dict(restarts=3, trials=None), config_file=path, verbose=False)
        self.assertEqual(config.get('restarts'), 3)
        self.assertIsNone(config.get('trials'))

    def test_bad_files(self):
        with self.assertRaises(ValueError):
            load_config_file(self.write_yaml(dict(gapp=dict(trials=3))))
        with self.assertRaises(ValueError):
            load_config_file(self.write_yaml('- 1\n- 2\n', 'list.yaml'))
        self.assertEqual(load_config_file(self.write_yaml('', 'empty.yaml')), {})

    def test_bad_values(self):
        with self.assertRaises(ValueError):
            load_experiment_config('simulate', verbose=False)
        with self.assertRaises(ValueError):
            load_experiment_config('gap', dict(seed=-1), verbose=False)
        with self.assertRaises(ValueError):
            load_experiment_config('gap', dict(seed=2 ** 64), verbose=False)
        with self.assertRaises(ValueError):
            load_experiment_config('gap', dict(formats=['csv', 'pdf']), verbose=False)
        with self.assertRaises(ValueError):
            load_experiment_config('gap', dict(M=[]), verbose=False)
        with self.assertRaises(ValueError):
            load_experiment_config('recurrence', dict(horizon=0.0), verbose=False)

    def test_string_formats(self):
        path = self.write_yaml(dict(common=dict(formats='csv,json')))
        self.assertEqual(load_experiment_config('measure', config_file=path, verbose=False).formats, ('csv', 'json'))

    def test_merge_dicts(self):
        base = dict(a=1, b=dict(c=2, d=3))
        merged = merge_dicts(base, dict(b=dict(c=5), e=6))
        self.assertEqual(merged, dict(a=1, b=dict(c=5, d=3), e=6))
        self.assertEqual(base['b']['c'], 2)


class TestCommandLine(unittest.TestCase):
    """Test parse_list / parse_cli_overrides"""

    def test_parse_list(self):
        self.assertEqual(parse_list('1, 2,3', int), [1, 2, 3])
        self.assertEqual(parse_list('0.01,0.02'), [0.01, 0.02])
        self.assertIsNone(parse_list(None))

    def test_overrides(self):
        args = docopt_args(gap=True, **{'--seed': '7', '--M': '1,4', '--margins': '0.1,0.2', '--no-mp': True,
                                        '--c': '0.6,0.8j', '--p-mode': 'dirichlet', '--format': 'csv'})
        overrides = parse_cli_overrides(args)
        self.assertEqual(overrides['seed'], 7)
        self.assertEqual(overrides['M'], [1, 4])
        self.assertEqual(overrides['margins'], [0.1, 0.2])
        self.assertEqual(overrides['c'], ['0.6', '0.8j'])
        self.assertEqual(overrides['p_mode'], 'dirichlet')
        self.assertEqual(overrides['formats'], ['csv'])
        self.assertTrue(overrides['no_mp'])
        self.assertNotIn('timing', overrides)
        self.assertIsNone(overrides['trials'])

    def test_overrides_apply(self):
        args = docopt_args(measure=True, **{'--K': '3', '--out': 'here', '--timing': True})
        config = load_experiment_config('measure', parse_cli_overrides(args), verbose=False)
        self.assertEqual(config.get('K'), [3])
        self.assertEqual(config.output_dir, 'here')
        self.assertTrue(config.get('timing'))


if __name__ == '__main__':
    unittest.main()
