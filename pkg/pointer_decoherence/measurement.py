#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: measurement.py
Description: Object + pointer-device measurement states.

The device space is split into K+1 orthogonal sectors of M microstates each.
Sector 0 holds the ready states |alpha_{0,s}>, sector i+1 holds the pointer
states |alpha_{i+1,s}> reached from object state |psi_i> (object indices are
0-based here). Device basis index = sector * M + s.

States come in two representations: dense DensityOperators (small M, used as
an oracle) and BranchStates, which keep only (c, p, theta) and evaluate
spectra and expectations in closed form, so M can go to ~10**6.
"""

from dataclasses import dataclass, replace

import numpy as np

from .linalg import (HilbertSpace, DensityOperator, PureState, clamp_spectrum,
                     spectrum_entropy)


OBJECT = 'object'
DEVICE = 'device'

DENSE_LIMIT = 4096
INPUT_NORM_TOL = 1e-6
READY_SECTOR_TOL = 1e-12


class DenseLimitError(ValueError):
    pass


def check_dense_size(K, M):
    dim = K * (K + 1) * M
    if dim > DENSE_LIMIT:
        raise DenseLimitError(
            "dense state would have dimension K*(K+1)*M = {d} > {lim}; "
            "use the structured BranchState path (dense=False) instead".format(d=dim, lim=DENSE_LIMIT))
    return dim


def normalise_amplitudes(c, tol=INPUT_NORM_TOL):
    """Return c / |c|, refusing vectors that are off by more than tol."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.ndim != 1 or c.size < 1:
        raise ValueError("amplitudes must be a non-empty vector")
    norm2 = np.vdot(c, c).real
    if abs(norm2 - 1) > tol:
        raise ValueError("amplitudes have squared norm %.12g, not 1" % norm2)
    return c / np.sqrt(norm2)


def normalise_weights(p, tol=INPUT_NORM_TOL):
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.ndim != 1 or p.size < 1:
        raise ValueError("microstate weights must be a non-empty vector")
    if p.min() < 0:
        raise ValueError("microstate weight %.3g is negative" % p.min())
    total = p.sum()
    if abs(total - 1) > tol:
        raise ValueError("microstate weights sum to %.12g, not 1" % total)
    return p / total


@dataclass(frozen=True, eq=False)
class PointerMeasurementModel(object):

    """Object amplitudes c, pre-set phases theta0, microstate weights p and the
    K x M phase table theta."""

    c: np.ndarray
    theta0: np.ndarray
    p: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        c = normalise_amplitudes(self.c)
        p = normalise_weights(self.p)
        theta0 = np.zeros(c.size) if self.theta0 is None else np.array(self.theta0, dtype=float).ravel()
        theta = np.array(self.theta, dtype=float).reshape(c.size, -1) if self.theta is not None \
            else np.zeros((c.size, p.size))
        if theta0.shape != (c.size,):
            raise ValueError("theta0 has shape {s}, expected ({k},)".format(s=theta0.shape, k=c.size))
        if theta.shape != (c.size, p.size):
            raise ValueError("phase table has shape {s}, expected ({k}, {m})".format(
                s=theta.shape, k=c.size, m=p.size))
        for name, value in [('c', c), ('theta0', theta0), ('p', p), ('theta', theta)]:
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def K(self):
        return self.c.size

    @property
    def M(self):
        return self.p.size

    @property
    def object_dim(self):
        return self.K

    @property
    def device_dim(self):
        return (self.K + 1) * self.M

    @property
    def dense_dim(self):
        return self.K * self.device_dim

    @property
    def weights(self):
        """Outcome probabilities |c_i|^2."""
        return np.abs(self.c) ** 2

    @property
    def space(self):
        return HilbertSpace((self.object_dim, self.device_dim), (OBJECT, DEVICE))

    def device_index(self, sector, s):
        return sector * self.M + s

    def branch_index(self, i, s):
        """Flat index of |psi_i>|alpha_{i+1,s}>."""
        return i * self.device_dim + self.device_index(i + 1, s)

    def with_phases(self, theta):
        return replace(self, theta=np.asarray(theta, dtype=float))

    def __repr__(self):
        return "PointerMeasurementModel(K={k}, M={m})".format(k=self.K, m=self.M)


def sample_phases(K, M, rng):
    """i.i.d. uniform phases on [0, 2 pi)."""
    return rng.uniform(0, 2 * np.pi, size=(K, M))


def sample_weights(M, rng, mode='uniform'):
    if mode == 'uniform':
        return np.full(M, 1.0 / M)
    elif mode == 'dirichlet':
        return rng.dirichlet(np.ones(M))
    else:
        raise ValueError("unknown microstate weight mode %r (uniform|dirichlet)" % mode)


def random_amplitudes(K, rng):
    z = rng.standard_normal(K) + 1j * rng.standard_normal(K)
    return z / np.linalg.norm(z)


def random_model(K, M, rng, c=None, p_mode='uniform'):
    """Pointer model with random phases (and random c unless given)."""
    c = random_amplitudes(K, rng) if c is None else c
    p = sample_weights(M, rng, p_mode)
    theta = sample_phases(K, M, rng)
    return PointerMeasurementModel(c=c, theta0=None, p=p, theta=theta)


def pointer_model(c, p=None, theta=None, theta0=None):
    """Convenience constructor; p defaults to a single microstate."""
    p = np.ones(1) if p is None else p
    return PointerMeasurementModel(c=c, theta0=theta0, p=p, theta=theta)


class MacroscopicObservable(object):

    """K x K Hermitian matrix a of pointer-branch matrix elements.

    a[i, j] = <psi_j alpha_{j,s}| A |psi_i alpha_{i,s}> for every s, so on the
    full space A acts on each microstate block as a.T and annihilates sector 0.
    """

    def __init__(self, a):
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        if a.shape[0] != a.shape[1]:
            raise ValueError("observable matrix must be square, got %s" % repr(a.shape))
        if np.abs(a - a.conj().T).max() > 1e-12:
            raise ValueError("observable matrix is not Hermitian")
        self.a = a
        self.a.setflags(write=False)

    @property
    def K(self):
        return self.a.shape[0]

    @classmethod
    def sigma_x_pattern(cls, K=2, i=0, j=1):
        a = np.zeros((K, K))
        a[i, j] = a[j, i] = 1
        return cls(a)

    @classmethod
    def diagonal(cls, values):
        return cls(np.diag(values))

    def check_model(self, model):
        if self.K != model.K:
            raise ValueError("observable is {a}x{a} but model has K = {k}".format(a=self.K, k=model.K))

    def to_operator(self, M):
        """Full object (x) device matrix for M microstates per sector."""
        K = self.K
        dim = check_dense_size(K, M)
        op = np.zeros((dim, dim), dtype=complex)
        branches = np.arange(K) * (K + 1) * M + (np.arange(K) + 1) * M
        for s in range(M):
            idx = branches + s
            op[np.ix_(idx, idx)] = self.a.T
        return op


class BranchState(object):

    """Structured ready (initial), post-interaction (exact) or branch-diagonal
    (reduced) state, evaluated in closed form."""

    KINDS = ('initial', 'exact', 'reduced')

    def __init__(self, kind, model):
        if kind not in self.KINDS:
            raise ValueError("unknown branch state kind %r" % kind)
        self.kind = kind
        self.model = model

    @property
    def space(self):
        return self.model.space

    def spectrum(self):
        """Non-zero eigenvalues of the full operator."""
        m = self.model
        if self.kind == 'reduced':
            return np.outer(m.weights, m.p).ravel()
        return m.p.copy()

    def marginal_spectrum(self, label):
        m = self.model
        if label == OBJECT:
            if self.kind == 'initial':
                return np.ones(1)
            return m.weights
        elif label == DEVICE:
            if self.kind == 'initial':
                return m.p.copy()
            return np.outer(m.weights, m.p).ravel()
        raise ValueError("unknown subsystem label {l!r}, space has {ls}".format(l=label, ls=(OBJECT, DEVICE)))

    def entropy(self, base=2):
        return spectrum_entropy(clamp_spectrum(self.spectrum()), base)

    def marginal_entropy(self, label, base=2):
        return spectrum_entropy(clamp_spectrum(self.marginal_spectrum(label)), base)

    def __repr__(self):
        return "BranchState({k}, K={K}, M={M})".format(k=self.kind, K=self.model.K, M=self.model.M)


def premeasurement_pure(c, theta0=None):
    """|psi>|alpha_0><alpha_0|<psi| with a single ready state (M = 1).

    theta0 only enters after the interaction; it is accepted so that pre- and
    post-measurement states can be built from the same arguments.
    """
    model = pointer_model(normalise_amplitudes(c), theta0=theta0)
    return to_dense(BranchState('initial', model))


def postmeasurement_pure(c, theta0=None):
    """sum_ij c_i c_j* e^{i(theta_i - theta_j)} |psi_i alpha_i><psi_j alpha_j| (M = 1)."""
    c = normalise_amplitudes(c)
    theta0 = np.zeros(c.size) if theta0 is None else np.asarray(theta0, dtype=float)
    model = pointer_model(c, theta=theta0.reshape(-1, 1), theta0=theta0)
    amplitudes = np.zeros(model.dense_dim, dtype=complex)
    for i in range(model.K):
        amplitudes[model.branch_index(i, 0)] = c[i] * np.exp(1j * theta0[i])
    return PureState(model.space, amplitudes).to_density()


def premeasurement_mixed(model, dense=False):
    """sum_s p_s |psi>|alpha_{0,s}><alpha_{0,s}|<psi|."""
    state = BranchState('initial', model)
    return to_dense(state) if dense else state


def apply_measurement(model, dense=False):
    """Branch map |psi_i>|alpha_{0,s}> -> e^{i theta_{i,s}} |psi_i>|alpha_{i,s}>."""
    state = BranchState('exact', model)
    return to_dense(state) if dense else state


def reduce(state):
    """Drop the branch coherences.

    BranchStates go exact -> reduced (reduced stays reduced). A dense operator
    on the object (x) device space of a pointer model is dephased in the
    product basis. That is the branch basis only once every branch has left
    the ready sector, so weight on sector 0 is rejected.
    """
    if isinstance(state, BranchState):
        if state.kind == 'initial':
            raise ValueError("reduction applies to post-measurement states, got the initial state")
        return BranchState('reduced', state.model)
    if isinstance(state, DensityOperator):
        K, M = _model_from_space(state.space)
        diagonal = np.diag(state.matrix).real
        ready = diagonal.reshape(K, K + 1, M)[:, 0, :].sum()
        if ready > READY_SECTOR_TOL:
            raise ValueError("reduction applies to post-measurement states, "
                             "the state has weight %.3g on the ready sector" % ready)
        return DensityOperator(state.space, np.diag(diagonal), check=False)
    raise ValueError("cannot reduce a %s" % type(state).__name__)


def _branch_vectors(model, kind):
    """Columns v_s with rho = sum_s p_s |v_s><v_s|."""
    vectors = np.zeros((model.dense_dim, model.M), dtype=complex)
    s = np.arange(model.M)
    for i in range(model.K):
        if kind == 'initial':
            rows = i * model.device_dim + model.device_index(0, s)
            vectors[rows, s] = model.c[i]
        else:
            rows = i * model.device_dim + model.device_index(i + 1, s)
            vectors[rows, s] = model.c[i] * np.exp(1j * model.theta[i])
    return vectors


def to_dense(state):
    """Materialise a BranchState as a DensityOperator."""
    model = state.model
    check_dense_size(model.K, model.M)
    if state.kind == 'reduced':
        diagonal = np.zeros(model.dense_dim)
        for i in range(model.K):
            rows = [model.branch_index(i, s) for s in range(model.M)]
            diagonal[rows] = model.weights[i] * model.p
        matrix = np.diag(diagonal).astype(complex)
    else:
        vectors = _branch_vectors(model, state.kind)
        matrix = (vectors * model.p) @ vectors.conj().T
    return DensityOperator(model.space, matrix, check=False)


def coherence_factors(model):
    """F[i, j] = sum_s p_s exp(i (theta_{i,s} - theta_{j,s}))."""
    phases = np.exp(1j * model.theta)
    return (phases * model.p) @ phases.conj().T


def _model_from_space(space):
    K, device_dim = space.subsystem_dims
    if device_dim % (K + 1):
        raise ValueError("device dimension {d} is not (K+1)*M for K = {k}".format(d=device_dim, k=K))
    return K, device_dim // (K + 1)


def expectation(state, A):
    """tr(rho A) for a macroscopic observable.

    Exact branch states use sum_ij c_i c_j* a_ij F_ij, reduced ones
    sum_i |c_i|^2 a_ii, the initial state 0 (A vanishes on sector 0). Dense
    operators are traced against A's full-space matrix.
    """
    if isinstance(state, BranchState):
        model = state.model
        A.check_model(model)
        if state.kind == 'initial':
            return 0.0
        if state.kind == 'reduced':
            return float(np.sum(model.weights * np.diag(A.a).real))
        rho_obj = np.outer(model.c, model.c.conj())
        return float(np.sum(rho_obj * A.a * coherence_factors(model)).real)

    K, M = _model_from_space(state.space)
    if A.K != K:
        raise ValueError("observable is {a}x{a} but state has K = {k}".format(a=A.K, k=K))
    return float(np.einsum('ij,ji->', state.matrix, A.to_operator(M)).real)


def decoherence_error(model, A):
    """|tr(rho A) - tr(rho' A)|, exact against reduced."""
    exact = expectation(BranchState('exact', model), A)
    reduced = expectation(BranchState('reduced', model), A)
    return abs(exact - reduced)
