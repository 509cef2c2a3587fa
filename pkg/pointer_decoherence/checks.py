#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: checks.py
Description: cross-module invariant checks, run by `run_lab.py validate`.

Each check returns a CheckResult row; the suite fails if any row does.
"""

from collections import namedtuple
from datetime import datetime as dt

import numpy as np
import pandas as pd

from .linalg import partial_trace, shannon_entropy, random_unitary
from .measurement import (OBJECT, random_model, random_amplitudes, pointer_model, premeasurement_pure,
                          postmeasurement_pure, premeasurement_mixed, apply_measurement, reduce, to_dense,
                          check_dense_size, DENSE_LIMIT)
from .infotheory import (accessible_mutual_information, mutual_entropy, verify_inequality,
                         pointer_information, is_product_state, INEQUALITY_SLACK)
from .dynamics import (random_energy_model, commensurate_energy_model, recurrence_scan,
                       revival_distance)
from .experiments import (RunOutput, random_bipartite_state, structured_dense_deviation, inject_fault,
                          sample_decoherence_errors, fit_loglog_slope, search_options, as_int_list,
                          report_resources)
from .utils import print_good, print_bad, dataframe_to_table, make_rng, seed_sequence


CheckResult = namedtuple('CheckResult', ['check', 'passed', 'value', 'tolerance', 'detail'])

# first element of every rng key, one stream family per check
DENSE_KEY, REDUCTION_KEY, CERTIFY_KEY, POINTER_KEY, RETURN_KEY, UNITARY_KEY = range(6)

ORACLE_TOL = 1e-9
IDENTITY_TOL = 1e-10
ZERO_TOL = 1e-10
GAP_TOL = 1e-6
# largest dense dimension handed to the projective search
OPTIMALITY_MAX_DIM = 24


def check_dense_vs_structured(Ks, Ms, seed, fault=None, base=2):
    """Closed forms against the dense oracle on a small (K, M) grid."""
    worst = 0.0
    for K in Ks:
        for M in Ms:
            rng = make_rng(seed, DENSE_KEY, K, M)
            model = inject_fault(random_model(K, M, rng, p_mode='dirichlet'), fault)
            exact = apply_measurement(model)
            for state in (premeasurement_mixed(model), exact, reduce(exact)):
                worst = max(worst, structured_dense_deviation(state, base))

            dephased = reduce(to_dense(exact)).matrix
            worst = max(worst, np.abs(dephased - to_dense(reduce(exact)).matrix).max())

            energies = random_energy_model(model, rng)
            times = np.linspace(0, 20, 11)
            closed = recurrence_scan(energies, times, 'closed').distances
            dense = recurrence_scan(energies, times, 'dense').distances
            worst = max(worst, np.abs(closed - dense).max())

    return CheckResult('dense vs structured', worst <= ORACLE_TOL, worst, ORACLE_TOL,
                       'K in {k}, M in {m}'.format(k=list(Ks), m=list(Ms)))


def check_object_reduction(trials, max_K, seed, fault=None):
    """Tracing out the device leaves sum_i |c_i|^2 |psi_i><psi_i|, whatever the phases."""
    worst = 0.0
    for t in range(trials):
        rng = make_rng(seed, REDUCTION_KEY, t)
        K = int(rng.integers(1, max_K + 1))
        c = random_amplitudes(K, rng)
        target = np.diag(np.abs(c) ** 2)

        rho = postmeasurement_pure(c, theta0=rng.uniform(0, 2 * np.pi, K))
        worst = max(worst, np.abs(partial_trace(rho, (OBJECT,)).matrix - target).max())

        model = inject_fault(random_model(K, 2, rng, c=c), fault)
        rho = to_dense(apply_measurement(model))
        worst = max(worst, np.abs(partial_trace(rho, (OBJECT,)).matrix - target).max())

    return CheckResult('object reduction identity', worst <= IDENTITY_TOL, worst, IDENTITY_TOL,
                       '{n} random (c, theta), K <= {k}'.format(n=trials, k=max_K))


def check_inequality(n_states, dims, seed, options):
    """I(A:C) <= S(A:C) on random bipartite states."""
    worst = -np.inf
    failures = 0
    for t in range(n_states):
        rng = make_rng(seed, CERTIFY_KEY, t)
        state = random_bipartite_state(rng, dims)
        result = verify_inequality(state, seed=seed_sequence(seed, CERTIFY_KEY, t, 1),
                                   **options)
        worst = max(worst, result.I - result.S)
        failures += not result.holds

    return CheckResult('I <= S certification', failures == 0, worst, INEQUALITY_SLACK,
                       '{f} failures in {n} states, dims {d}'.format(f=failures, n=n_states, d=list(dims)))


def check_pointer_models(n_models, Ks, Ms, seed, options, fault=None, base=2, search_max_dim=OPTIMALITY_MAX_DIM):
    """Pointer-model rows: reduced-state equality, pointer optimality on the
    reduced and exact states, gap separation and the zeros (and product form)
    before the interaction.

    The projective search only runs on models with at most search_max_dim
    dense dimensions.
    """
    reduced_dev = optimality = exact_optimality = separation = zeros = 0.0
    searched = 0
    entangled = []
    for t in range(n_models):
        rng = make_rng(seed, POINTER_KEY, t)
        K = int(rng.choice(Ks))
        M = int(rng.choice(Ms))
        model = inject_fault(random_model(K, M, rng, p_mode=('uniform', 'dirichlet')[t % 2]), fault)
        H = shannon_entropy(model.weights, base)

        exact = apply_measurement(model)
        reduced = reduce(exact)
        S_red = mutual_entropy(reduced, base=base)
        I_red = pointer_information(reduced, base)
        reduced_dev = max(reduced_dev, abs(S_red - I_red), abs(S_red - H))

        exact_gap = accessible_mutual_information(exact, 'pointer-exact', base=base).gap
        separation = max(separation, abs(exact_gap - H))

        initial = premeasurement_mixed(model)
        zeros = max(zeros, mutual_entropy(initial, base=base), pointer_information(initial, base))

        if model.dense_dim > min(search_max_dim, DENSE_LIMIT):
            continue
        searched += 1
        if not is_product_state(to_dense(initial), tol=ZERO_TOL):
            entangled.append(t)

        search = dict(options, strategy='projective-search')
        found = accessible_mutual_information(reduced, seed=seed_sequence(seed, POINTER_KEY, t, 1),
                                              **search).accessible_info
        optimality = max(optimality, found - I_red)
        found = accessible_mutual_information(exact, seed=seed_sequence(seed, POINTER_KEY, t, 2),
                                              **search).accessible_info
        exact_optimality = max(exact_optimality, found - pointer_information(exact, base))

    detail = '{n} models, K in {k}, M in {m}'.format(n=n_models, k=list(Ks), m=list(Ms))
    searches = '{s} dense searches, {r} restarts each'.format(s=searched, r=options['restarts'])
    return [
        CheckResult('reduced state S = I = H(|c|^2)', reduced_dev <= ORACLE_TOL, reduced_dev, ORACLE_TOL, detail),
        CheckResult('pointer POVM optimality', optimality <= GAP_TOL, optimality, GAP_TOL, searches),
        CheckResult('exact-state pointer optimality', exact_optimality <= GAP_TOL, exact_optimality, GAP_TOL,
                    searches),
        CheckResult('gap separation (exact vs reduced)', separation <= GAP_TOL and reduced_dev <= ORACLE_TOL,
                    separation, GAP_TOL,
                    'exact gap against H(|c|^2); reduced gap as in the S = I row'),
        CheckResult('zeros before measurement', zeros <= ZERO_TOL and not entangled, zeros, ZERO_TOL,
                    '{d}; ready states not in product form: {e}'.format(d=detail, e=entangled)),
    ]


def check_equal_superposition(base=2):
    """c = (1, 1)/sqrt(2): one bit after reduction, nothing before."""
    c = np.full(2, 2 ** -0.5)
    reduced = reduce(apply_measurement(pointer_model(c, p=np.full(4, 0.25))))
    one_bit = np.log(2) / np.log(base)
    dev = max(abs(mutual_entropy(reduced, base=base) - one_bit),
              abs(pointer_information(reduced, base) - one_bit),
              mutual_entropy(premeasurement_pure(c), base=base))
    return CheckResult('one bit for an equal superposition', dev <= ORACLE_TOL, dev, ORACLE_TOL, 'K = 2, M = 4')


def check_decoherence_scaling(Ms, draws, seed, expected, fault=None):
    """Mean decoherence error falls like M^(-1/2) under random phases."""
    means = [sample_decoherence_errors(2, M, draws, seed, fault=fault).mean() for M in Ms]
    slope = fit_loglog_slope(Ms, means)
    passed = bool(np.isfinite(slope) and expected[0] <= slope <= expected[1])
    return CheckResult('decoherence scaling', passed, slope, 0.5 * (expected[1] - expected[0]),
                       'slope in {e}, M in {m}, {d} draws'.format(e=list(expected), m=list(Ms), d=draws))


def check_commensurate_return(Ms, seed):
    """Integer energies bring the state back at t = 2 pi."""
    worst = 0.0
    for M in Ms:
        rng = make_rng(seed, RETURN_KEY, M)
        base = pointer_model(random_amplitudes(3, rng), p=np.full(M, 1.0 / M))
        model = commensurate_energy_model(base, rng.integers(0, 6, size=(3, M)))
        worst = max(worst, float(revival_distance(model, [2 * np.pi])[0]))
        try:
            check_dense_size(3, M)
        except ValueError:
            continue
        worst = max(worst, recurrence_scan(model, [2 * np.pi], 'dense').min_distance)
    return CheckResult('commensurate return', worst <= ORACLE_TOL, worst, ORACLE_TOL,
                       'K = 3, M in {m}'.format(m=list(Ms)))


def check_random_unitary(seed, dims=(2, 3, 4)):
    worst = 0.0
    for d in dims:
        U = random_unitary(d, make_rng(seed, UNITARY_KEY, d))
        worst = max(worst, np.abs(U.conj().T @ U - np.eye(d)).max())
    return CheckResult('random unitaries are unitary', worst <= ORACLE_TOL, worst, ORACLE_TOL,
                       'd in {d}'.format(d=list(dims)))


def run_validation_suite(params, seed, fault=None, base=2):
    """All invariant checks; returns a dataframe with one row per check."""
    options = search_options(params, base)
    options.pop('strategy')

    stages = [
        lambda: [check_dense_vs_structured(as_int_list(params['oracle_K'], 'oracle_K'),
                                           as_int_list(params['oracle_M'], 'oracle_M'), seed, fault, base)],
        lambda: [check_object_reduction(int(params['reduction_trials']), int(params['reduction_max_K']), seed, fault)],
        lambda: [check_inequality(int(params['random_states']), as_int_list(params['dims'], 'dims'), seed,
                                  dict(options, strategy='hybrid'))],
        lambda: check_pointer_models(int(params['pointer_models']), as_int_list(params['pointer_K'], 'pointer_K'),
                                     as_int_list(params['pointer_M'], 'pointer_M'), seed, options, fault, base,
                                     int(params.get('optimality_max_dim', OPTIMALITY_MAX_DIM))),
        lambda: [check_equal_superposition(base)],
        lambda: [check_decoherence_scaling(as_int_list(params['scaling_M'], 'scaling_M'),
                                           int(params['scaling_draws']), seed, params['expected_slope'], fault)],
        lambda: [check_commensurate_return(as_int_list(params['commensurate_M'], 'commensurate_M'), seed)],
        lambda: [check_random_unitary(seed)],
    ]

    results = []
    for stage in stages:
        for result in stage():
            if result.passed:
                print_good("passed: {c} ({v:.3g})".format(c=result.check, v=result.value))
            else:
                print_bad("FAILED: {c} ({v:.3g}, tolerance {t:.3g})".format(
                    c=result.check, v=result.value, t=result.tolerance))
            results.append(result)

    return pd.DataFrame(results, columns=CheckResult._fields)


def run_validate(config):
    """`validate` subcommand: run the suite, print the table, exit 1 on any failure."""
    t_start = dt.now()
    p = config.params
    fault = p.get('fault')
    if fault is not None:
        print_bad("Running with injected fault '{f}'".format(f=fault))

    results = run_validation_suite(p, config.seed, fault, p.get('base', 2))
    print(dataframe_to_table(results))

    out = RunOutput(config)
    out.write_csv(results, 'validate.csv')
    out.write_json(dict(fault=fault, checks=results.to_dict(orient='records')), 'validate.json')
    report_resources('validate', t_start)

    n_failed = int((~results['passed']).sum())
    if n_failed:
        print_bad("{n} of {t} checks failed".format(n=n_failed, t=len(results)))
        return out.finish(1)
    print_good("All {t} checks passed".format(t=len(results)))
    return out.finish(0)
