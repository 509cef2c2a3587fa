#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: infotheory.py
Description: Mutual entropy, POVM mutual information and accessible information.

Party A is the device and party C the measured object for pointer models;
for any other bipartite space A is the first label. All quantities are in
bits unless a different `base` is passed, and every function uses the same
base for S, H and I so that comparisons stay consistent.
"""

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from scipy.linalg import expm
from scipy.optimize import minimize

from .linalg import (as_density, partial_trace, permute_subsystems,
                     von_neumann_entropy, eig_hermitian, spectrum_entropy, random_unitary,
                     HERMITIAN_TOL)
from .measurement import BranchState, OBJECT, DEVICE, DENSE_LIMIT, to_dense
from .utils import seed_sequence


INEQUALITY_SLACK = 1e-6
STRATEGIES = ('pointer-exact', 'projective-search', 'hybrid')


class Povm(object):

    """Finite set of effects on one subsystem.

    Rank-one measurements keep only their vectors (columns of `vectors`);
    computational-basis measurements keep nothing at all, so pointer
    measurements on huge devices cost no memory until effects are asked for.
    """

    def __init__(self, effects=None, labels=None, vectors=None, dim=None, check=True):
        self._effects = None if effects is None else np.asarray(effects, dtype=complex)
        self._vectors = None if vectors is None else np.asarray(vectors, dtype=complex)
        if self._effects is not None:
            self.dim = self._effects.shape[1]
            self.n_outcomes = self._effects.shape[0]
        elif self._vectors is not None:
            self.dim, self.n_outcomes = self._vectors.shape
        elif dim is not None:
            self.dim = self.n_outcomes = int(dim)
        else:
            raise ValueError("a POVM needs effects, vectors or a computational-basis dimension")
        if labels is not None and len(labels) != self.n_outcomes:
            raise ValueError("{nl} labels for {n} outcomes".format(nl=len(labels), n=self.n_outcomes))
        self.labels = labels
        if check:
            self.validate()

    @classmethod
    def from_basis(cls, vectors, labels=None):
        return cls(vectors=vectors, labels=labels)

    @classmethod
    def computational(cls, dim, labels=None):
        return cls(dim=dim, labels=labels, check=False)

    @property
    def is_computational(self):
        return self._effects is None and self._vectors is None

    @property
    def vectors(self):
        if self._vectors is None and self.is_computational:
            return np.eye(self.dim, dtype=complex)
        return self._vectors

    @property
    def effects(self):
        if self._effects is not None:
            return self._effects
        v = self.vectors
        return np.einsum('ak,bk->kab', v, v.conj())

    def validate(self):
        if self._vectors is not None:
            completeness = self._vectors @ self._vectors.conj().T
        else:
            effects = self._effects
            if effects.ndim != 3 or effects.shape[1] != effects.shape[2]:
                raise ValueError("POVM effects must be square matrices, got shape %s" % repr(effects.shape))
            for k, e in enumerate(effects):
                if np.abs(e - e.conj().T).max() > HERMITIAN_TOL:
                    raise ValueError("POVM effect %d is not Hermitian" % k)
                if np.linalg.eigvalsh(0.5 * (e + e.conj().T)).min() < -1e-10:
                    raise ValueError("POVM effect %d is not positive semidefinite" % k)
            completeness = effects.sum(axis=0)
        err = np.abs(completeness - np.eye(self.dim)).max()
        if err > 1e-9:
            raise ValueError("POVM effects don't sum to the identity (max deviation %.3g)" % err)

    def permuted(self, order):
        """Same measurement with outcomes relabelled in `order`."""
        order = list(order)
        labels = None if self.labels is None else [self.labels[k] for k in order]
        if self._effects is not None:
            return Povm(effects=self._effects[order], labels=labels, check=False)
        return Povm(vectors=self.vectors[:, order], labels=labels, check=False)

    def __repr__(self):
        return "Povm(dim={d}, outcomes={n})".format(d=self.dim, n=self.n_outcomes)


@dataclass
class CorrelationReport(object):

    """S(A:C), the accessible-information lower bound I and their gap."""

    mutual_entropy: float
    accessible_info: float
    best_povms: tuple = None
    optimizer_meta: dict = field(default_factory=dict)
    base: float = 2

    @property
    def gap(self):
        return self.mutual_entropy - self.accessible_info

    @property
    def holds(self):
        return self.accessible_info <= self.mutual_entropy + INEQUALITY_SLACK

    def as_row(self):
        return dict(S_bits=self.mutual_entropy, I_bits=self.accessible_info, gap_bits=self.gap,
                    converged=bool(self.optimizer_meta.get('converged', True)),
                    strategy=self.optimizer_meta.get('strategy'))


InequalityCheck = namedtuple('InequalityCheck', ['holds', 'S', 'I', 'slack'])


def default_split(space):
    """(A labels, C labels): device/object for pointer models, else first/rest."""
    if set(space.labels) == {OBJECT, DEVICE}:
        return (DEVICE,), (OBJECT,)
    return space.labels[:1], space.labels[1:]


def _check_split(space, split):
    split = default_split(space) if split is None else split
    labels_a, labels_c = (tuple([l]) if isinstance(l, str) else tuple(l) for l in split)
    if not labels_a or not labels_c or set(labels_a) & set(labels_c) \
            or set(labels_a) | set(labels_c) != set(space.labels):
        raise ValueError("split {s} is not a bipartition of {l}".format(s=split, l=space.labels))
    return labels_a, labels_c


def mutual_entropy(state, split=None, base=2):
    """S(A:C) = S(rho_A) + S(rho_C) - S(rho_AC), clamped at 0."""
    if isinstance(state, BranchState):
        labels_a, labels_c = _check_split(state.space, split)
        value = (state.marginal_entropy(labels_a[0], base) + state.marginal_entropy(labels_c[0], base)
                 - state.entropy(base))
    else:
        rho = as_density(state)
        labels_a, labels_c = _check_split(rho.space, split)
        value = (von_neumann_entropy(partial_trace(rho, labels_a), base)
                 + von_neumann_entropy(partial_trace(rho, labels_c), base)
                 - von_neumann_entropy(rho, base))
    return max(0.0, value)


def table_information(P, base=2):
    """H(p) + H(q) - H(P) of a joint outcome table; zero cells contribute 0."""
    P = np.clip(np.asarray(P, dtype=float), 0, None)
    value = (spectrum_entropy(P.sum(axis=1), base) + spectrum_entropy(P.sum(axis=0), base)
             - spectrum_entropy(P.ravel(), base))
    return max(0.0, value)


def _bipartite_view(rho, split):
    labels_a, labels_c = _check_split(rho.space, split)
    rho = permute_subsystems(rho, labels_a + labels_c)
    d_a = rho.space.subspace(labels_a).dim
    d_c = rho.space.subspace(labels_c).dim
    return rho, d_a, d_c


def joint_distribution(state, E, F, split=None):
    """P_ij = tr[(E_i (x) F_j) rho_AC]."""
    rho, d_a, d_c = _bipartite_view(as_density(state), split)
    if E.dim != d_a or F.dim != d_c:
        raise ValueError("POVM dimensions ({e}, {f}) don't match the split ({a}, {c})".format(
            e=E.dim, f=F.dim, a=d_a, c=d_c))

    if E.is_computational and F.is_computational:
        return np.diag(rho.matrix).real.reshape(d_a, d_c)
    if E._effects is None and F._effects is None:
        basis = np.kron(E.vectors, F.vectors)
        P = np.einsum('ki,ki->i', basis.conj(), rho.matrix @ basis).real
        return P.reshape(E.n_outcomes, F.n_outcomes)
    rho4 = rho.matrix.reshape(d_a, d_c, d_a, d_c)
    return np.einsum('iab,jcd,bdac->ij', E.effects, F.effects, rho4, optimize=True).real


def classical_mutual_information(state, E, F, split=None, base=2):
    """H(E:F) of the outcome table of the product measurement E (x) F."""
    return table_information(joint_distribution(state, E, F, split), base)


def pointer_povm(model):
    """(device POVM, object POVM): every |alpha_{k,s}> and every |psi_j>."""
    small = model.dense_dim <= DENSE_LIMIT
    device_labels = [(k, s) for k in range(model.K + 1) for s in range(model.M)] if small else None
    device = Povm.computational(model.device_dim, labels=device_labels)
    obj = Povm.computational(model.K, labels=list(range(model.K)))
    return device, obj


def pointer_information(state, base=2):
    """Closed-form H(E:F) of the pointer POVMs on a BranchState."""
    model = state.model
    if state.kind == 'initial':
        table = np.outer(model.p, model.weights)
    else:
        # device outcome (i+1, s) only ever coincides with object outcome i
        table = np.outer(model.weights, model.p)
        table = table.ravel()[:, None] * np.eye(model.K).repeat(model.M, axis=0)
    return table_information(table, base)


def _generator_count(d):
    return d * (d - 1)


def _unitary(params, base_unitary):
    d = base_unitary.shape[0]
    if d == 1:
        return base_unitary
    iu = np.triu_indices(d, 1)
    n = iu[0].size
    h = np.zeros((d, d), dtype=complex)
    h[iu] = params[:n] + 1j * params[n:]
    return base_unitary @ expm(1j * (h + h.conj().T))


def search_objective(rho, d_a, d_c, base_a, base_c, base=2):
    """-H(E:F) for basis measurements U(x_a), W(x_c); x = concat(x_a, x_c)."""
    n_a = _generator_count(d_a)

    def objective(x):
        basis = np.kron(_unitary(x[:n_a], base_a), _unitary(x[n_a:], base_c))
        P = np.einsum('ki,ki->i', basis.conj(), rho.matrix @ basis).real
        return -table_information(P.reshape(d_a, d_c), base)

    return objective


def finite_difference_gradient(objective, x, h=1e-6):
    """Central differences, for checking the search objective."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for k in range(x.size):
        step = np.zeros_like(x)
        step[k] = h
        grad[k] = (objective(x + step) - objective(x - step)) / (2 * h)
    return grad


def projective_search(rho, split=None, restarts=32, maxiter=500, tol=1e-9, seed=0, base=2,
                      max_evaluations=20000):
    """Multi-start Powell ascent of H(E:F) over local basis measurements.

    Restart 0 starts from the eigenbases of the two marginals, the others from
    Haar-random bases drawn from seed_sequence(seed, r). Each restart stops
    after maxiter sweeps or max_evaluations objective calls. Ties go to the
    earliest restart.

    :returns: (best value, (E, F), meta dict)
    """
    rho, d_a, d_c = _bipartite_view(as_density(rho), split)
    labels_a, labels_c = _check_split(rho.space, split)
    n_a, n_c = _generator_count(d_a), _generator_count(d_c)

    best = (-np.inf, None, None)
    meta = dict(strategy='projective-search', restarts=int(restarts), iterations=0, evaluations=0,
                converged=False, max_evaluated=-np.inf)

    for r in range(max(1, int(restarts))):
        if r == 0:
            base_a = eig_hermitian(partial_trace(rho, labels_a))[1]
            base_c = eig_hermitian(partial_trace(rho, labels_c))[1]
        else:
            rng = np.random.default_rng(seed_sequence(seed, r))
            base_a = random_unitary(d_a, rng)
            base_c = random_unitary(d_c, rng)
        objective = search_objective(rho, d_a, d_c, base_a, base_c, base)

        if n_a + n_c == 0:
            x, value, nit, nfev, success = np.zeros(0), -objective(np.zeros(0)), 0, 1, True
        else:
            result = minimize(objective, np.zeros(n_a + n_c), method='Powell',
                              options=dict(maxiter=int(maxiter), maxfev=int(max_evaluations),
                                             xtol=1e-8, ftol=tol))
            x, value = result.x, -result.fun
            nit, nfev, success = int(result.nit), int(result.nfev), bool(result.success)

        meta['iterations'] += nit
        meta['evaluations'] += nfev
        meta['max_evaluated'] = max(meta['max_evaluated'], value)
        if value > best[0]:
            bases = (_unitary(x[:n_a], base_a), _unitary(x[n_a:], base_c))
            best = (value, bases, success)
            meta['best_restart'] = r
            meta['converged'] = success

    value, (u_a, u_c), _ = best
    povms = (Povm.from_basis(u_a), Povm.from_basis(u_c))
    return value, povms, meta


def accessible_mutual_information(state, strategy='hybrid', split=None, restarts=32, maxiter=500,
                                  tol=1e-9, seed=0, base=2, max_evaluations=20000):
    """Lower bound on I(A:C) = max over product POVMs of H(E:F).

    pointer-exact evaluates the pointer POVMs of a BranchState in closed form,
    projective-search runs the multi-start ascent on the dense operator, and
    hybrid keeps the larger of the two (pointer first on ties).
    """
    if strategy not in STRATEGIES:
        raise ValueError("unknown strategy %r, expected one of %s" % (strategy, STRATEGIES))
    is_branch = isinstance(state, BranchState)
    if strategy == 'pointer-exact' and not is_branch:
        raise ValueError("pointer-exact needs a BranchState (pointer provenance), got a %s"
                         % type(state).__name__)
    if is_branch and split is not None:
        _check_split(state.space, split)

    S = mutual_entropy(state, split, base)
    candidates = []

    if is_branch and strategy in ('pointer-exact', 'hybrid'):
        meta = dict(strategy='pointer-exact', restarts=0, iterations=0, evaluations=1, converged=True)
        value = pointer_information(state, base)
        meta['max_evaluated'] = value
        candidates.append((value, pointer_povm(state.model), meta))

    if strategy == 'projective-search' or (strategy == 'hybrid' and not (
            is_branch and state.model.dense_dim > DENSE_LIMIT)):
        # too large for a dense search: hybrid keeps the pointer value only
        rho = to_dense(state) if is_branch else state
        candidates.append(projective_search(rho, split, restarts, maxiter, tol, seed, base,
                                            max_evaluations))

    value, povms, meta = candidates[0]
    for cand in candidates[1:]:
        if cand[0] > value:
            value, povms, meta = cand
    meta = dict(meta)
    if strategy == 'hybrid':
        meta['strategy'] = 'hybrid:' + meta['strategy']
        meta['max_evaluated'] = max(c[2]['max_evaluated'] for c in candidates)

    return CorrelationReport(mutual_entropy=S, accessible_info=float(value), best_povms=povms,
                             optimizer_meta=meta, base=base)


def verify_inequality(state, strategy='hybrid', **kwargs):
    """S(A:C) >= I(A:C); with I a lower bound, a failure is a real defect."""
    report = accessible_mutual_information(state, strategy, **kwargs)
    holds = report.accessible_info <= report.mutual_entropy + INEQUALITY_SLACK
    return InequalityCheck(holds=holds, S=report.mutual_entropy, I=report.accessible_info,
                           slack=report.mutual_entropy - report.accessible_info)


def macroscopicity_gap(state, strategy='hybrid', **kwargs):
    """Delta = S(A:C) - I(A:C); 0 marks the decohered, macroscopic regime."""
    return accessible_mutual_information(state, strategy, **kwargs).gap


def is_product_state(rho, split=None, tol=1e-10):
    """True when rho_AC equals rho_A (x) rho_C entrywise within tol."""
    rho, d_a, d_c = _bipartite_view(as_density(rho), split)
    labels_a, labels_c = _check_split(rho.space, split)
    product = np.kron(partial_trace(rho, labels_a).matrix, partial_trace(rho, labels_c).matrix)
    return bool(np.abs(product - rho.matrix).max() <= tol)
