#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: experiments.py
Description: Experiment runners behind the run_lab.py subcommands.

Each run_<command>(config) takes an ExperimentConfig, sweeps its parameter
grid (one process per grid point unless no_mp is set), writes CSV/JSON/SVG
artifacts plus a <command>_run.json sidecar to config.output_dir, and
returns an exit status.

Every sweep point draws its randomness from make_rng(seed, *key) with a key
fixed before the sweep starts, and rows are sorted before writing, so the
artifacts don't depend on the number of workers.
"""

import json
import os

from datetime import datetime as dt
from multiprocessing import Pool

import numpy as np
import pandas as pd

from . import __version__
from . import plots
from .linalg import HilbertSpace, random_density_operator
from .measurement import (BranchState, DenseLimitError, MacroscopicObservable, random_model,
                          pointer_model, premeasurement_mixed, apply_measurement, reduce, to_dense,
                          expectation, decoherence_error, check_dense_size)
from .infotheory import (accessible_mutual_information, mutual_entropy, pointer_information,
                         pointer_povm, classical_mutual_information)
from .dynamics import (commensurate_energy_model, random_energy_model, recurrence_scan,
                       recurrence_fraction, counterexample_search, replay_counterexample)
from .utils import (print_good, print_warn, print_bad, dataframe_to_table, make_rng, seed_sequence,
                    get_suitable_ncores, memory_usage, elapsed_since)


AMPLITUDE_AUTO_NORM_TOL = 1e-3
ORACLE_TOL = 1e-9
RETURN_TOL = 1e-9

KINDS = ('initial', 'exact', 'reduced')
GAP_SOURCES = ('reduced', 'exact', 'random-bipartite')
SOURCE_TRIALS = {'random-bipartite': 1000, 'reduced': 50, 'exact': 50}
OBSERVABLES = ('sigma_x', 'diagonal')
FAULTS = ('coherent-phases',)


##########################
# Output
##########################

def _json_ready(obj):
    """numpy/tuple/float -> plain JSON values, floats at 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return None
        return float('%.12g' % obj)
    return obj


def dumps_json(data):
    return json.dumps(_json_ready(data), sort_keys=True, indent=2) + '\n'


class RunOutput(object):

    """Writes the artifacts of one run and keeps the list for the sidecar."""

    def __init__(self, config):
        self.config = config
        self.artifacts = []
        os.makedirs(config.output_dir, exist_ok=True)

    def wants(self, fmt):
        return fmt in self.config.formats

    def path(self, filename):
        return os.path.join(self.config.output_dir, filename)

    def _announce(self, path):
        if os.path.isfile(path):
            print_warn("Overwriting {f}".format(f=path))
        else:
            print_good("Writing {f}".format(f=path))

    def write_csv(self, df, filename):
        if not self.wants('csv'):
            return
        path = self.path(filename)
        self._announce(path)
        df.to_csv(path, index=False, float_format='%.12g')
        self.artifacts.append(filename)

    def write_json(self, data, filename, force=False):
        if not (force or self.wants('json')):
            return
        path = self.path(filename)
        self._announce(path)
        with open(path, 'w') as f:
            f.write(dumps_json(data))
        self.artifacts.append(filename)

    def write_svg(self, make_figure, filename):
        """make_figure is only called when SVG output is requested."""
        if not self.wants('svg'):
            return
        plots.save_figure(self.path(filename), make_figure())
        self.artifacts.append(filename)

    def finish(self, status=0):
        """Sidecar with everything needed to re-run this command."""
        sidecar = dict(command=self.config.command,
                       seed=self.config.seed,
                       version=__version__,
                       config=self.config.to_dict(),
                       rng='numpy PCG64, stream for key k = SeedSequence(seed, spawn_key=k)',
                       artifacts=sorted(self.artifacts),
                       status=int(status))
        self.write_json(sidecar, '{c}_run.json'.format(c=self.config.command), force=True)
        return status


def report_resources(command, t_start):
    print("{c} finished in {t}, using {m} memory.".format(
        c=command, t=elapsed_since(t_start), m=memory_usage()))


def map_points(func, f_args, no_mp=False):
    """starmap over sweep points, in-process when no_mp is set."""
    if no_mp or len(f_args) < 2:
        return [func(*args) for args in f_args]

    ncores = min(get_suitable_ncores(), len(f_args))
    print("Running on %d core(s)" % ncores)
    with Pool(ncores) as p:
        return p.starmap(func, f_args)


##########################
# Parameter helpers
##########################

def as_int_list(value, name):
    values = value if isinstance(value, (list, tuple)) else [value]
    values = [int(v) for v in values]
    if not values or min(values) < 1:
        raise ValueError("'{n}' needs positive integers, got {v}".format(n=name, v=value))
    return values


def as_single_int(value, name):
    values = as_int_list(value, name)
    if len(values) != 1:
        raise ValueError("'{n}' takes a single value here, got {v}".format(n=name, v=value))
    return values[0]


def parse_amplitudes(c, K):
    """Amplitude list (numbers or strings like '0.6+0.8j') -> unit vector.

    None gives equal amplitudes. Vectors whose squared norm is off by less
    than 1e-3 are normalised with a warning, anything further off is refused.
    """
    if c is None:
        return np.full(K, 1 / np.sqrt(K), dtype=complex)
    c = np.array([complex(str(v).replace(' ', '')) for v in c])
    if c.size != K:
        raise ValueError("{n} amplitudes given for K = {k}".format(n=c.size, k=K))
    norm2 = np.vdot(c, c).real
    if abs(norm2 - 1) > AMPLITUDE_AUTO_NORM_TOL:
        raise ValueError("amplitudes have squared norm %.6g, more than %g away from 1"
                         % (norm2, AMPLITUDE_AUTO_NORM_TOL))
    if abs(norm2 - 1) > 1e-12:
        print_warn("Normalising amplitudes (squared norm was %.9g)" % norm2)
    return c / np.sqrt(norm2)


def search_options(params, base=None):
    """Optimizer settings for accessible_mutual_information."""
    return dict(strategy=params.get('strategy', 'hybrid'),
                restarts=int(params['restarts']),
                maxiter=int(params['maxiter']),
                tol=float(params['tol']),
                max_evaluations=int(params['max_evaluations']),
                base=params.get('base', 2) if base is None else base)


def make_observable(name, K):
    if name == 'sigma_x':
        if K < 2:
            raise ValueError("the sigma_x pattern observable needs K >= 2")
        return MacroscopicObservable.sigma_x_pattern(K)
    elif name == 'diagonal':
        return MacroscopicObservable.diagonal(np.arange(1, K + 1, dtype=float))
    raise ValueError("unknown observable %r, expected one of %s" % (name, OBSERVABLES))


def inject_fault(model, fault):
    """Deliberately broken phase tables for exercising the validation suite.

    'coherent-phases' gives every branch the same phase for each microstate,
    so the branch coherences never average out.
    """
    if fault is None:
        return model
    if fault == 'coherent-phases':
        return model.with_phases(np.tile(model.theta[0], (model.K, 1)))
    raise ValueError("unknown fault %r, expected one of %s" % (fault, FAULTS))


def structured_dense_deviation(state, base=2):
    """Largest disagreement between the closed forms and the dense oracle."""
    dense = to_dense(state)
    model = state.model
    deviations = [abs(mutual_entropy(state, base=base) - mutual_entropy(dense, base=base)),
                  abs(pointer_information(state, base) -
                      classical_mutual_information(dense, *pointer_povm(model), base=base))]
    if model.K >= 2:
        A = MacroscopicObservable.sigma_x_pattern(model.K)
        deviations.append(abs(expectation(state, A) - expectation(dense, A)))
    return max(deviations)


##########################
# measure
##########################

def _measure_point(K, M, c, p_mode, options, seed, dense_check, timing):
    t_start = dt.now()
    rng = make_rng(seed, K, M)
    model = random_model(K, M, rng, c=parse_amplitudes(c, K) if c is not None else np.full(K, K ** -0.5),
                         p_mode=p_mode)
    exact = apply_measurement(model)
    states = dict(initial=premeasurement_mixed(model), exact=exact, reduced=reduce(exact))

    ok = True
    rows = []
    for n, kind in enumerate(KINDS):
        report = accessible_mutual_information(states[kind], seed=seed_sequence(seed, K, M, n), **options)
        if not report.holds:
            print_bad("FAILURE: I > S for the {k} state, K={K}, M={M}: S = {s:.9g}, I = {i:.9g}".format(
                k=kind, K=K, M=M, s=report.mutual_entropy, i=report.accessible_info))
            ok = False
        if not report.optimizer_meta.get('converged', True):
            print_warn("Optimizer did not converge for the {k} state, K={K}, M={M}; I is a lower bound".format(
                k=kind, K=K, M=M))
        rows.append(dict(kind=kind, K=K, M=M, seed=seed, S_bits=report.mutual_entropy,
                         I_bits=report.accessible_info, gap_bits=report.gap))

    if dense_check:
        try:
            check_dense_size(K, M)
        except DenseLimitError as e:
            print_warn("Dense cross-check skipped: " + str(e))
        else:
            deviation = max(structured_dense_deviation(states[kind], options['base']) for kind in KINDS)
            if deviation > ORACLE_TOL:
                print_bad("Dense and structured results differ by %.3g at K=%d, M=%d" % (deviation, K, M))
                ok = False

    if timing:
        wall_time = (dt.now() - t_start).total_seconds()
        for row in rows:
            row['wall_time'] = wall_time

    return rows, ok


def run_measure(config):
    """Ready, post-interaction and reduced states for each (K, M) point."""
    t_start = dt.now()
    p = config.params
    Ks = as_int_list(p['K'], 'K')
    Ms = as_int_list(p['M'], 'M')
    if p.get('c') is not None and len(Ks) > 1:
        raise ValueError("explicit amplitudes need a single K, got K = %s" % Ks)
    if p.get('c') is not None:
        parse_amplitudes(p['c'], Ks[0])

    options = search_options(p)
    f_args = [(K, M, p.get('c'), p.get('p_mode', 'uniform'), options, config.seed,
               bool(p.get('dense_check', True)), bool(p.get('timing', False)))
              for K in Ks for M in Ms]
    print_good("Measuring {n} (K, M) point(s) with the {s} strategy".format(n=len(f_args), s=options['strategy']))
    results = map_points(_measure_point, f_args, p.get('no_mp', False))

    rows = [row for point_rows, _ in results for row in point_rows]
    df = pd.DataFrame(rows)
    df['kind'] = pd.Categorical(df['kind'], categories=KINDS, ordered=True)
    df = df.sort_values(['K', 'M', 'kind']).reset_index(drop=True)
    df['kind'] = df['kind'].astype(str)
    print(dataframe_to_table(df))

    status = 0 if all(ok for _, ok in results) else 1
    out = RunOutput(config)
    out.write_csv(df, 'measure.csv')
    out.write_json(dict(rows=df.to_dict(orient='records')), 'measure.json')
    report_resources('measure', t_start)

    return out.finish(status)


##########################
# decoherence
##########################

def sample_decoherence_errors(K, M, draws, seed, c=None, p_mode='uniform', observable='sigma_x', fault=None):
    """|tr(rho A) - tr(rho' A)| for `draws` independent phase tables.

    Draw d at M uses make_rng(seed, M, d).
    """
    A = make_observable(observable, K)
    c = np.full(K, K ** -0.5) if c is None else c
    errors = np.empty(draws)
    for d in range(draws):
        model = inject_fault(random_model(K, M, make_rng(seed, M, d), c=c, p_mode=p_mode), fault)
        errors[d] = decoherence_error(model, A)
    return errors


def fit_loglog_slope(M_values, means):
    """Slope of log10(mean error) against log10(M); nan if undefined."""
    M_values = np.asarray(M_values, dtype=float)
    means = np.asarray(means, dtype=float)
    if M_values.size < 2 or np.any(means <= 0):
        return np.nan
    return float(np.polyfit(np.log10(M_values), np.log10(means), 1)[0])


def _decoherence_point(K, M, draws, seed, c, p_mode, observable, fault):
    c = np.full(K, K ** -0.5) if c is None else c
    errors = sample_decoherence_errors(K, M, draws, seed, c, p_mode, observable, fault)

    deviation = np.nan
    if M <= 4:
        try:
            check_dense_size(K, M)
        except DenseLimitError:
            pass
        else:
            model = inject_fault(random_model(K, M, make_rng(seed, M, 0), c=c, p_mode=p_mode), fault)
            A = make_observable(observable, K)
            dense_error = abs(expectation(to_dense(BranchState('exact', model)), A) -
                              expectation(to_dense(BranchState('reduced', model)), A))
            deviation = abs(dense_error - errors[0])

    rows = [dict(M=M, draw=d, error=e) for d, e in enumerate(errors)]
    return rows, deviation


def run_decoherence(config):
    """Random-phase scaling of the decoherence error with M."""
    t_start = dt.now()
    p = config.params
    K = as_single_int(p['K'], 'K')
    Ms = sorted(as_int_list(p['M'], 'M'))
    draws = int(p['draws'])
    if draws < 30:
        raise ValueError("need at least 30 draws per M, got %d" % draws)
    c = None if p.get('c') is None else parse_amplitudes(p['c'], K)
    observable = p.get('observable', 'sigma_x')
    make_observable(observable, K)

    f_args = [(K, M, draws, config.seed, c, p.get('p_mode', 'uniform'), observable, None) for M in Ms]
    print_good("Sampling {d} phase tables at M = {m}".format(d=draws, m=Ms))
    results = map_points(_decoherence_point, f_args, p.get('no_mp', False))

    status = 0
    draws_df = pd.DataFrame([row for rows, _ in results for row in rows]).sort_values(['M', 'draw'])
    for M, (_, deviation) in zip(Ms, results):
        if np.isfinite(deviation) and deviation > ORACLE_TOL:
            print_bad("Dense and structured errors differ by %.3g at M=%d" % (deviation, M))
            status = 1

    summary = draws_df.groupby('M')['error'].agg(['mean', 'std', 'count']).reset_index()
    summary.columns = ['M', 'mean_error', 'std_error', 'draws']
    summary['std_error'] = summary['std_error'].fillna(0.0)
    slope = fit_loglog_slope(summary['M'], summary['mean_error'])
    print(dataframe_to_table(summary))

    expected = p.get('expected_slope')
    if not np.isfinite(slope):
        print_warn("No log-log slope: fewer than two M values or a zero mean error")
    elif expected is not None and not (expected[0] <= slope <= expected[1]):
        print_warn("Fitted slope {s:.4f} is outside {e}".format(s=slope, e=expected))
    else:
        print_good("Fitted slope {s:.4f}".format(s=slope))

    out = RunOutput(config)
    out.write_csv(draws_df.reset_index(drop=True), 'decoherence_draws.csv')
    out.write_csv(summary, 'decoherence_summary.csv')
    out.write_json(dict(K=K, observable=observable, slope=slope, expected_slope=expected,
                        summary=summary.to_dict(orient='records')), 'decoherence.json')
    out.write_svg(lambda: plots.plot_decoherence_scaling(summary, slope), 'decoherence.svg')
    report_resources('decoherence', t_start)

    return out.finish(status)


##########################
# gap
##########################

def random_bipartite_state(rng, dims):
    """Ginibre state on A (x) C with dimensions and rank drawn from rng."""
    d_a, d_c = (int(d) for d in rng.choice(dims, size=2))
    space = HilbertSpace((d_a, d_c), ('A', 'C'))
    rank = int(rng.integers(1, d_a * d_c + 1))
    return random_density_operator(space, rng, rank=rank)


def _gap_point(source, trial, seed, Ks, Ms, dims, p_mode, options, timing):
    t_start = dt.now()
    rng = make_rng(seed, trial)
    if source == 'random-bipartite':
        state = random_bipartite_state(rng, dims)
        shape = dict(d_A=state.space.subsystem_dims[0], d_C=state.space.subsystem_dims[1])
    else:
        K = int(rng.choice(Ks))
        M = int(rng.choice(Ms))
        state = apply_measurement(random_model(K, M, rng, p_mode=p_mode))
        if source == 'reduced':
            state = reduce(state)
        shape = dict(d_A=state.model.device_dim, d_C=K)

    report = accessible_mutual_information(state, seed=seed_sequence(seed, trial), **options)
    row = dict(source=source, trial=trial, seed=seed, **shape)
    row.update(report.as_row())
    row['status'] = 'ok' if report.holds else 'FAILURE'
    if timing:
        row['wall_time'] = (dt.now() - t_start).total_seconds()
    return row


def run_gap(config):
    """Certify I(A:C) <= S(A:C) and report the macroscopicity gap."""
    t_start = dt.now()
    p = config.params
    source = p.get('source', 'random-bipartite')
    if source not in GAP_SOURCES:
        raise ValueError("unknown state source %r, expected one of %s" % (source, GAP_SOURCES))
    trials = SOURCE_TRIALS[source] if p.get('trials') is None else int(p['trials'])
    if trials < 1:
        raise ValueError("need at least one trial")

    options = search_options(p)
    f_args = [(source, t, config.seed, as_int_list(p['K'], 'K'), as_int_list(p['M'], 'M'),
               as_int_list(p['dims'], 'dims'), p.get('p_mode', 'uniform'), options,
               bool(p.get('timing', False)))
              for t in range(trials)]
    print_good("Certifying {n} {s} state(s) with the {st} strategy".format(n=trials, s=source, st=options['strategy']))
    rows = map_points(_gap_point, f_args, p.get('no_mp', False))
    df = pd.DataFrame(rows).sort_values('trial').reset_index(drop=True)

    failures = df[df['status'] != 'ok']
    for _, row in failures.iterrows():
        print_bad("FAILURE: trial {t}: I = {i:.9g} > S = {s:.9g}".format(t=row['trial'], i=row['I_bits'], s=row['S_bits']))
    n_unconverged = int((~df['converged']).sum())
    if n_unconverged:
        print_warn("{n} of {t} searches stopped before converging (their I values remain lower bounds)".format(
            n=n_unconverged, t=trials))

    summary = dict(source=source, trials=trials, failures=len(failures), unconverged=n_unconverged,
                   max_gap=df['gap_bits'].max(), min_gap=df['gap_bits'].min(),
                   max_abs_gap=df['gap_bits'].abs().max(), mean_gap=df['gap_bits'].mean())
    print(dataframe_to_table(pd.DataFrame([summary])))

    out = RunOutput(config)
    out.write_csv(df, 'gap.csv')
    out.write_json(summary, 'gap.json')
    out.write_svg(lambda: plots.plot_gap(df), 'gap.svg')
    report_resources('gap', t_start)

    if len(failures):
        print_bad("{n} state(s) violate I <= S".format(n=len(failures)))
        return out.finish(1)
    print_good("I <= S holds for all {n} states".format(n=trials))
    return out.finish(0)


##########################
# recurrence
##########################

def _commensurate_point(K, M, seed, c, epsilon, max_level, trace_points, method):
    base = pointer_model(c, p=np.full(M, 1.0 / M))
    levels = make_rng(seed, M).integers(0, int(max_level) + 1, size=(K, M))
    model = commensurate_energy_model(base, levels, epsilon)
    period = 2 * np.pi / float(epsilon)

    scan = recurrence_scan(model, np.linspace(0, period, int(trace_points)), method)
    at_period = recurrence_scan(model, [period], method).min_distance
    # t = 0 is excluded, the grid ends on the period
    min_distance, argmin_time = scan.min_after(scan.times[1])
    summary = dict(mode='commensurate', K=K, M=M, seed=seed, period=period,
                   distance_at_period=at_period, min_distance=min_distance, argmin_time=argmin_time,
                   max_distance=float(scan.distances.max()), returned=bool(at_period <= RETURN_TOL))
    trace = [dict(M=M, t=t, distance=d) for t, d in zip(scan.times, scan.distances)]
    return [summary], trace


def _incommensurate_point(K, M, seed, c, n_seeds, horizon, dt_step, t_min, threshold, energy_scale,
                          trace_points, method):
    _, minima, argmin_times = recurrence_fraction(M, n_seeds, seed, K=K, c=c, horizon=horizon, dt=dt_step,
                                                  t_min=t_min, threshold=threshold, energy_scale=energy_scale)
    rows = [dict(mode='incommensurate', K=K, M=M, seed=seed, seed_index=k, min_distance=m, argmin_time=t,
                 returned=bool(m < threshold))
            for k, (m, t) in enumerate(zip(minima, argmin_times))]

    # the trace shows seed index 0, the same energies recurrence_fraction drew first
    base = pointer_model(c, p=np.full(M, 1.0 / M))
    model = random_energy_model(base, make_rng(seed, M, 0), energy_scale)
    scan = recurrence_scan(model, np.linspace(0, horizon, int(trace_points)), method)
    trace = [dict(M=M, t=t, distance=d) for t, d in zip(scan.times, scan.distances)]
    return rows, trace


def run_recurrence(config):
    """Coherence revivals for commensurate or random branch energies."""
    t_start = dt.now()
    p = config.params
    mode = p.get('mode', 'incommensurate')
    K = as_single_int(p['K'], 'K')
    Ms = sorted(as_int_list(p['M'], 'M'))
    c = parse_amplitudes(p.get('c'), K)
    method = p.get('method', 'closed')
    if method == 'dense':
        for M in Ms:
            check_dense_size(K, M)
    if int(p['trace_points']) < 2:
        raise ValueError("trace_points must be at least 2, got %s" % p['trace_points'])

    if mode == 'commensurate':
        f_args = [(K, M, config.seed, c, float(p['epsilon']), int(p['max_level']), int(p['trace_points']),
                   method) for M in Ms]
        results = map_points(_commensurate_point, f_args, p.get('no_mp', False))
    elif mode == 'incommensurate':
        f_args = [(K, M, config.seed, c, int(p['seeds']), float(p['horizon']), float(p['dt']),
                   float(p['t_min']), float(p['threshold']), float(p['energy_scale']),
                   int(p['trace_points']), method) for M in Ms]
        print_good("Scanning {n} energy draws per M up to t = {h:g}".format(n=int(p['seeds']), h=float(p['horizon'])))
        results = map_points(_incommensurate_point, f_args, p.get('no_mp', False))
    else:
        raise ValueError("unknown recurrence mode %r (incommensurate|commensurate)" % mode)

    rows = pd.DataFrame([row for point_rows, _ in results for row in point_rows])
    trace = pd.DataFrame([row for _, point_trace in results for row in point_trace]).sort_values(
        ['M', 't'], kind='mergesort').reset_index(drop=True)

    if mode == 'commensurate':
        summary = rows.sort_values('M').reset_index(drop=True)
        for _, row in summary[~summary['returned']].iterrows():
            print_warn("M = {m}: distance {d:.3g} at the common period".format(m=row['M'], d=row['distance_at_period']))
    else:
        rows = rows.sort_values(['M', 'seed_index']).reset_index(drop=True)
        summary = rows.groupby('M').agg(fraction=('returned', 'mean'), min_distance=('min_distance', 'min'),
                                        median_distance=('min_distance', 'median')).reset_index()
        # time of the closest approach over all seeds, first seed on ties
        closest = rows.loc[rows.groupby('M')['min_distance'].idxmin()]
        summary['argmin_time'] = closest['argmin_time'].values
        summary['argmin_seed_index'] = closest['seed_index'].values
        summary.insert(0, 'mode', mode)
        summary['seeds'] = int(p['seeds'])
        summary['threshold'] = float(p['threshold'])
    print(dataframe_to_table(summary))

    out = RunOutput(config)
    out.write_csv(trace, 'recurrence_trace.csv')
    out.write_csv(summary, 'recurrence_summary.csv')
    if mode == 'incommensurate':
        out.write_csv(rows, 'recurrence_minima.csv')
    out.write_json(dict(mode=mode, K=K, summary=summary.to_dict(orient='records')), 'recurrence.json')
    threshold = float(p['threshold']) if mode == 'incommensurate' else None
    out.write_svg(lambda: plots.plot_recurrence_trace(trace, threshold), 'recurrence.svg')
    report_resources('recurrence', t_start)

    return out.finish(0)


##########################
# counterexample
##########################

def run_counterexample(config):
    """Three-qubit search for S(A:C) falling while I(A:C) rises."""
    t_start = dt.now()
    p = config.params
    margins = tuple(float(m) for m in p['margins'])
    if len(margins) != 2 or min(margins) < 0:
        raise ValueError("margins must be two non-negative numbers, got %s" % (p['margins'],))
    kwargs = dict(margins=margins, steps=int(p['steps']), pair=tuple(int(q) for q in p['pair']),
                  restarts=int(p['restarts']), confirm_restarts=int(p['confirm_restarts']),
                  maxiter=int(p['maxiter']))

    print_good("Searching up to {n} trials, margins dS > {a:g}, dI > {b:g}".format(
        n=int(p['trials']), a=margins[0], b=margins[1]))
    result = counterexample_search(config.seed, trials=int(p['trials']), **kwargs)
    data = result.to_dict()

    status = 0
    if result.found:
        print_good("Found at trial {t}, steps {a} -> {b}: S {s1:.6f} -> {s2:.6f}, I {i1:.6f} -> {i2:.6f}".format(
            t=result.trial, a=result.t1, b=result.t2, s1=result.S1, s2=result.S2, i1=result.I1, i2=result.I2))
        replayed = replay_counterexample(config.seed, result.trial, **kwargs)
        if replayed is None or dumps_json(replayed.to_dict()) != dumps_json(data):
            print_bad("Replaying trial {t} did not reproduce the instance".format(t=result.trial))
            status = 1
        print(dataframe_to_table(pd.DataFrame(result.table)))

    out = RunOutput(config)
    out.write_json(data, 'counterexample.json')
    report_resources('counterexample', t_start)

    return out.finish(status)
