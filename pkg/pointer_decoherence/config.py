#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: config.py
Description: Layered experiment configuration.

Packaged defaults (data/defaults.yaml) < YAML file given with --config <
command-line flags. Values are addressed by key paths, e.g.
get_config(['gap', 'restarts']).
"""

import copy

from dataclasses import dataclass, field
from importlib import resources

import yaml

from .utils import print_good, print_warn


FORMATS = ('csv', 'json', 'svg')
COMMANDS = ('measure', 'decoherence', 'gap', 'recurrence', 'counterexample', 'validate')

_config = None


def load_defaults():
    text = resources.files('pointer_decoherence').joinpath('data/defaults.yaml').read_text()
    return yaml.safe_load(text)


def _get_store():
    global _config
    if _config is None:
        _config = load_defaults()
    return _config


def get_config(keys):
    """Value at a key path in the module-wide configuration."""
    node = _get_store()
    for k in keys:
        node = node[k]
    return copy.deepcopy(node)


def set_config(keys, value):
    node = _get_store()
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = value


def reset_config():
    global _config
    _config = None


def merge_dicts(base, override):
    """Recursive dict update, returning a new dict."""
    merged = copy.deepcopy(base)
    for k, v in (override or {}).items():
        if isinstance(v, dict) and isinstance(merged.get(k), dict):
            merged[k] = merge_dicts(merged[k], v)
        else:
            merged[k] = copy.deepcopy(v)
    return merged


def load_config_file(path):
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError("config file {p} must hold a mapping, got {t}".format(p=path, t=type(data).__name__))
    unknown = set(data) - set(COMMANDS) - {'common'}
    if unknown:
        raise ValueError("unknown sections in {p}: {u}".format(p=path, u=sorted(unknown)))
    return data


@dataclass(frozen=True)
class ExperimentConfig(object):

    """Resolved settings for one command run."""

    command: str
    seed: int
    output_dir: str
    formats: tuple
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)

    def to_dict(self):
        return dict(command=self.command, seed=self.seed, output_dir=self.output_dir,
                    formats=list(self.formats), params=self.params)


def _flatten(section):
    """common + command block -> one parameter dict."""
    return merge_dicts(section.get('common', {}), section.get('command', {}))


def _layer(data, command):
    return dict(common=data.get('common', {}) or {}, command=data.get(command, {}) or {})


def _check_params(command, params):
    if params.get('seed') is None:
        raise ValueError("a seed is required for '%s'" % command)
    seed = int(params['seed'])
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer, got %d" % seed)
    formats = params.get('formats') or []
    if isinstance(formats, str):
        formats = [f for f in formats.split(',') if f]
    bad = set(formats) - set(FORMATS)
    if bad:
        raise ValueError("unknown output formats {b}, expected a subset of {f}".format(b=sorted(bad), f=FORMATS))
    for key, value in params.items():
        if isinstance(value, list) and not value and key != 'formats':
            raise ValueError("grid '{k}' for '{c}' is empty".format(k=key, c=command))
    for key in ('tol', 'threshold', 'dt', 'horizon'):
        if key in params and params[key] is not None and float(params[key]) <= 0:
            raise ValueError("'{k}' must be positive, got {v}".format(k=key, v=params[key]))
    return seed, tuple(formats)


def load_experiment_config(command, cli_overrides=None, config_file=None, verbose=True):
    """Merge defaults, optional YAML file and command-line flags for `command`.

    :cli_overrides: flat dict of parameters given on the command line
    :returns: ExperimentConfig
    """
    if command not in COMMANDS:
        raise ValueError("unknown command %r" % command)

    defaults = _get_store()
    params = _flatten(_layer(defaults, command))
    if verbose:
        print_good("Defaults for {c}: {p}".format(c=command, p=params))

    if config_file is not None:
        file_params = _flatten(_layer(load_config_file(config_file), command))
        if verbose:
            print_warn("Config file {f} overrides: {p}".format(f=config_file, p=file_params))
        params = merge_dicts(params, file_params)

    cli_overrides = {k: v for k, v in (cli_overrides or {}).items() if v is not None}
    if cli_overrides:
        if verbose:
            print_warn("Command-line overrides: {p}".format(p=cli_overrides))
        params = merge_dicts(params, cli_overrides)

    seed, formats = _check_params(command, params)
    output_dir = str(params.pop('output_dir'))
    for k in ('seed', 'formats'):
        params.pop(k, None)
    return ExperimentConfig(command=command, seed=seed, output_dir=output_dir, formats=formats,
                            params=params)


def parse_list(text, kind=float):
    """'1,2,3' -> [1, 2, 3]"""
    if text is None:
        return None
    return [kind(x.strip()) for x in str(text).split(',') if x.strip()]


def parse_cli_overrides(args):
    """docopt args -> flat override dict (unset flags give None)."""
    def flag(name, parse=lambda x: x):
        value = args.get(name)
        return None if value is None else parse(value)

    overrides = dict(
        seed=flag('--seed', int),
        output_dir=flag('--out'),
        formats=flag('--format', lambda x: parse_list(x, str)),
        M=flag('--M', lambda x: parse_list(x, int)),
        K=flag('--K', lambda x: parse_list(x, int)),
        c=flag('--c', lambda x: [str(v) for v in parse_list(x, str)]),
        trials=flag('--trials', int),
        restarts=flag('--restarts', int),
        margins=flag('--margins', parse_list),
        horizon=flag('--horizon', float),
        draws=flag('--draws', int),
        source=flag('--source'),
        p_mode=flag('--p-mode'),
        mode=flag('--mode'),
        strategy=flag('--strategy'),
        fault=flag('--fault'),
    )
    for name, key in [('--no-mp', 'no_mp'), ('--timing', 'timing')]:
        if args.get(name):
            overrides[key] = True
    return overrides
