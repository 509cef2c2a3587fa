#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: dynamics.py
Description: Phase evolution of the pointer branches, coherence-revival scans
             and the three-qubit search for opposite changes of S(A:C) and
             I(A:C).

hbar = 1 and time is dimensionless: theta_{i,s}(t) = E_{i,s} t (mod 2 pi).
"""

from dataclasses import dataclass, field

import numpy as np

from scipy.stats import unitary_group

from .linalg import HilbertSpace, PureState, partial_trace, trace_distance, random_pure_state
from .measurement import BranchState, check_dense_size, to_dense, pointer_model
from .infotheory import mutual_entropy, projective_search, INEQUALITY_SLACK
from .utils import make_rng, seed_sequence, print_warn


TWO_PI = 2 * np.pi


@dataclass(frozen=True, eq=False)
class EnergyModel(object):

    """Branch energies E (K x M) on top of a pointer model."""

    E: np.ndarray
    base: object

    def __post_init__(self):
        E = np.array(self.E, dtype=float)
        if E.shape != (self.base.K, self.base.M):
            raise ValueError("energy table has shape {s}, expected ({k}, {m})".format(
                s=E.shape, k=self.base.K, m=self.base.M))
        if not np.all(np.isfinite(E)):
            raise ValueError("energy table has non-finite entries")
        E.setflags(write=False)
        object.__setattr__(self, 'E', E)

    def phases(self, t):
        return np.mod(self.E * t, TWO_PI)

    def shifted(self, offset):
        """Same model with every branch energy moved by `offset`."""
        return EnergyModel(self.E + offset, self.base)


def random_energy_model(base, rng, scale=1.0):
    """Incommensurate energies, i.i.d. uniform on [0, scale)."""
    return EnergyModel(rng.uniform(0, scale, size=(base.K, base.M)), base)


def commensurate_energy_model(base, n, epsilon=1.0):
    """E = n * epsilon for an integer table n; common period 2 pi / epsilon."""
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        raise ValueError("commensurate energies need an integer table")
    return EnergyModel(n * float(epsilon), base)


def evolve(model, t):
    """Exact branch state with theta_{i,s} = E_{i,s} t (mod 2 pi)."""
    if t < 0:
        raise ValueError("evolution time must be >= 0, got %g" % t)
    return BranchState('exact', model.base.with_phases(model.phases(t)))


@dataclass
class RecurrenceScan(object):

    times: np.ndarray
    distances: np.ndarray
    min_distance: float = field(init=False)
    argmin_time: float = field(init=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.distances = np.clip(np.asarray(self.distances, dtype=float), 0, 1)
        k = int(np.argmin(self.distances))
        self.min_distance = float(self.distances[k])
        self.argmin_time = float(self.times[k])

    def min_after(self, t_min):
        """(min distance, time) over t >= t_min."""
        mask = self.times >= t_min
        if not mask.any():
            raise ValueError("no scan times at or after %g" % t_min)
        k = int(np.argmin(np.where(mask, self.distances, np.inf)))
        return float(self.distances[k]), float(self.times[k])


def revival_distance(model, times, chunk_elements=2 ** 21):
    """Trace distance between rho(t) and rho(0), from the branch structure.

    The s-branches have orthogonal supports and each is pure, so
    D(t) = sum_s p_s sqrt(1 - |<v_s(0)|v_s(t)>|^2) with
    1 - |sum_i w_i e^{i phi_i}|^2 = 4 sum_{i<j} w_i w_j sin^2((phi_i - phi_j)/2).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    base = model.base
    w = base.weights
    pairs = [(i, j) for i in range(base.K) for j in range(i + 1, base.K)]
    out = np.zeros(times.size)
    if not pairs:
        return out

    step = max(1, chunk_elements // (base.M * len(pairs)))
    for start in range(0, times.size, step):
        t = times[start:start + step, None]
        loss = np.zeros((t.shape[0], base.M))
        for i, j in pairs:
            delta = (model.E[i] - model.E[j])[None, :] * t
            loss += 4 * w[i] * w[j] * np.sin(0.5 * delta) ** 2
        out[start:start + step] = np.sqrt(np.clip(loss, 0, 1)) @ base.p
    return out


def recurrence_scan(model, t_grid, method='dense'):
    """trace_distance(rho(t), rho(0)) over a time grid.

    method='dense' materialises every rho(t); 'closed' uses revival_distance
    and works for any M.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0):
        raise ValueError("scan times must be >= 0")
    if method == 'dense':
        check_dense_size(model.base.K, model.base.M)
        rho0 = to_dense(evolve(model, 0.0))
        distances = [trace_distance(to_dense(evolve(model, t)), rho0) for t in t_grid]
    elif method == 'closed':
        distances = revival_distance(model, t_grid)
    else:
        raise ValueError("unknown scan method %r (dense|closed)" % method)
    return RecurrenceScan(t_grid, distances)


def recurrence_fraction(M, n_seeds, seed, K=2, c=None, horizon=1e4, dt=0.01, t_min=50.0,
                        threshold=0.05, energy_scale=1.0):
    """Fraction of random-energy models that come back within `threshold`.

    Seed k uses make_rng(seed, M, k) for its energies. The scan covers
    [t_min, horizon) in steps of dt so the trivial dip at t = 0 is excluded.

    :returns: (fraction, per-seed minimum distances, times of those minima)
    """
    c = np.full(K, 1 / np.sqrt(K)) if c is None else c
    base = pointer_model(c, p=np.full(M, 1.0 / M))
    times = np.arange(t_min, horizon, dt)
    if times.size == 0:
        raise ValueError("empty scan: t_min {a:g} is not below the horizon {b:g}".format(a=t_min, b=horizon))
    minima = np.empty(n_seeds)
    argmin_times = np.empty(n_seeds)
    for k in range(n_seeds):
        model = random_energy_model(base, make_rng(seed, M, k), energy_scale)
        scan = RecurrenceScan(times, revival_distance(model, times))
        minima[k], argmin_times[k] = scan.min_after(t_min)
    return float(np.mean(minima < threshold)), minima, argmin_times


##########################
# Three-qubit search
##########################

QUBITS = ('q0', 'q1', 'q2')
THREE_QUBITS = HilbertSpace((2, 2, 2), QUBITS)


def random_two_qubit_step(rng):
    """Haar-random two-qubit unitary on a random pair of qubits."""
    pair = tuple(sorted(int(q) for q in rng.choice(3, size=2, replace=False)))
    return pair, unitary_group.rvs(4, random_state=rng)


def identity_step(rng):
    return (0, 1), np.eye(4, dtype=complex)


def apply_two_qubit(amplitudes, pair, U):
    psi = np.asarray(amplitudes, dtype=complex).reshape(2, 2, 2)
    psi = np.moveaxis(psi, pair, (0, 1))
    psi = (U @ psi.reshape(4, 2)).reshape(2, 2, 2)
    return np.moveaxis(psi, (0, 1), pair).ravel()


@dataclass
class CounterexampleInstance(object):

    """A step pair t1 < t2 where S(A:C) falls while I(A:C) rises."""

    seed: int
    trial: int
    initial_state: np.ndarray
    steps: list
    t1: int
    t2: int
    S1: float
    S2: float
    I1: float
    I2: float
    pair: tuple
    table: list
    found: bool = True

    def to_dict(self):
        return dict(
            found=True,
            seed=int(self.seed),
            trial=int(self.trial),
            pair=list(self.pair),
            t1=int(self.t1), t2=int(self.t2),
            S1=self.S1, S2=self.S2, I1=self.I1, I2=self.I2,
            initial_state=dict(real=self.initial_state.real.tolist(), imag=self.initial_state.imag.tolist()),
            steps=[dict(qubits=list(q), real=U.real.tolist(), imag=U.imag.tolist()) for q, U in self.steps],
            table=self.table)


@dataclass
class CounterexampleNotFound(object):

    seed: int
    trials: int
    best: dict
    found: bool = False

    def to_dict(self):
        return dict(found=False, seed=int(self.seed), trials=int(self.trials), best_candidate=self.best)


class _TrialRecord(object):

    """S and lazily evaluated I along one trajectory."""

    def __init__(self, seed, trial, pair, restarts, maxiter):
        self.seed = seed
        self.trial = trial
        self.labels = tuple(QUBITS[q] for q in pair)
        self.restarts = restarts
        self.maxiter = maxiter
        self.states = []
        self.S = []
        self.I = {}

    def reduced(self, k):
        return partial_trace(PureState(THREE_QUBITS, self.states[k], check=False), self.labels)

    def add(self, amplitudes):
        self.states.append(amplitudes)
        self.S.append(mutual_entropy(self.reduced(len(self.states) - 1), split=self.labels))

    def information(self, k, restarts=None):
        restarts = self.restarts if restarts is None else restarts
        if (k, restarts) not in self.I:
            value, _, _ = projective_search(self.reduced(k), split=self.labels, restarts=restarts,
                                            maxiter=self.maxiter,
                                            seed=seed_sequence(self.seed, self.trial, k, restarts))
            self.I[(k, restarts)] = value
        return max(v for (j, _), v in self.I.items() if j == k)

    def table(self):
        rows = []
        for k, S in enumerate(self.S):
            known = [v for (j, _), v in self.I.items() if j == k]
            rows.append(dict(step=k, S=S, I=max(known) if known else None))
        return rows


def _run_trial(seed, trial, steps, margins, pair, restarts, confirm_restarts, maxiter,
               initial_state, step_sampler):
    delta_s, delta_i = margins
    rng = make_rng(seed, trial)
    if initial_state is None:
        psi = random_pure_state(THREE_QUBITS, rng).amplitudes.copy()
    else:
        psi = np.array(initial_state, dtype=complex)
    record = _TrialRecord(seed, trial, pair, restarts, maxiter)
    record.add(psi)
    applied = []
    best = None

    for k in range(1, steps + 1):
        qubits, U = step_sampler(rng)
        applied.append((qubits, U))
        psi = apply_two_qubit(psi, qubits, U)
        record.add(psi)

        drop = record.S[k - 1] - record.S[k]
        if drop <= delta_s:
            continue
        rise = record.information(k) - record.information(k - 1)
        score = min(drop - delta_s, rise - delta_i)
        if best is None or score > best['score']:
            best = dict(trial=trial, t1=k - 1, t2=k, dS=-drop, dI=rise, score=score)
        if rise <= delta_i:
            continue

        # I(t1) is only a lower bound: try harder before reporting
        rise = record.information(k) - record.information(k - 1, confirm_restarts)
        if rise > delta_i:
            S1, S2 = record.S[k - 1], record.S[k]
            I1, I2 = record.information(k - 1), record.information(k)
            if I1 > S1 + INEQUALITY_SLACK or I2 > S2 + INEQUALITY_SLACK:
                raise RuntimeError("trial {t}: I(A:C) exceeds S(A:C) at steps {a}/{b} "
                                   "(S = {s1:.9g}/{s2:.9g}, I = {i1:.9g}/{i2:.9g})".format(
                                       t=trial, a=k - 1, b=k, s1=S1, s2=S2, i1=I1, i2=I2))
            instance = CounterexampleInstance(
                seed=seed, trial=trial, initial_state=record.states[0], steps=applied,
                t1=k - 1, t2=k, S1=S1, S2=S2, I1=I1, I2=I2, pair=pair, table=record.table())
            return instance, best

    return None, best


def counterexample_search(seed, trials=10000, margins=(0.01, 0.01), steps=4, pair=(0, 1),
                          restarts=8, confirm_restarts=32, maxiter=200, initial_state=None,
                          step_sampler=random_two_qubit_step):
    """First trial whose trajectory has S(A:C) falling by > margins[0] while
    I(A:C) rises by > margins[1] over one step.

    Trial k is driven entirely by make_rng(seed, k), so any instance can be
    regenerated with replay_counterexample(seed, k).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    best = None
    for trial in range(trials):
        instance, candidate = _run_trial(seed, trial, steps, margins, tuple(pair), restarts,
                                         confirm_restarts, maxiter, initial_state, step_sampler)
        if instance is not None:
            return instance
        if candidate is not None and (best is None or candidate['score'] > best['score']):
            best = candidate

    if best is not None:
        print_warn("No instance in {n} trials; best candidate trial {t}: dS = {ds:.4g}, dI = {di:.4g}".format(
            n=trials, t=best['trial'], ds=best['dS'], di=best['dI']))
    else:
        print_warn("No instance in {n} trials; S(A:C) never dropped by the margin".format(n=trials))
    return CounterexampleNotFound(seed=seed, trials=trials, best=best)


def replay_counterexample(seed, trial, margins=(0.01, 0.01), steps=4, pair=(0, 1), restarts=8,
                          confirm_restarts=32, maxiter=200, initial_state=None,
                          step_sampler=random_two_qubit_step):
    """Re-run one trial of counterexample_search."""
    instance, _ = _run_trial(seed, trial, steps, margins, tuple(pair), restarts, confirm_restarts,
                             maxiter, initial_state, step_sampler)
    return instance
