#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: linalg.py
Description: Dense Hermitian linear algebra on labelled tensor-product spaces.

Composite indices are object-major: the leftmost label is the most
significant digit of the flattened index, so |psi_i>|alpha_k> lives at
i * dim(device) + k when the object is listed first.
"""

import string

from dataclasses import dataclass

import numpy as np

from scipy.stats import unitary_group


HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
ZERO_EIG_TOL = 1e-12
NORM_TOL = 1e-12


def log_factor(base):
    """Multiplier turning natural logs into logs of the given base."""
    if base is None or base == 'e':
        return 1.0
    return 1.0 / np.log(base)


@dataclass(frozen=True)
class HilbertSpace(object):

    """Ordered tensor factors with names."""

    subsystem_dims: tuple
    labels: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.subsystem_dims)
        labels = tuple(str(l) for l in self.labels)
        if len(dims) != len(labels):
            raise ValueError("got {nd} dims for {nl} labels".format(nd=len(dims), nl=len(labels)))
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate subsystem labels: %s" % repr(labels))
        if any(d < 1 for d in dims):
            raise ValueError("subsystem dimensions must be >= 1, got %s" % repr(dims))
        object.__setattr__(self, 'subsystem_dims', dims)
        object.__setattr__(self, 'labels', labels)

    @property
    def dim(self):
        return int(np.prod(self.subsystem_dims))

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError("unknown subsystem label {l!r}, space has {ls}".format(l=label, ls=self.labels))

    def dim_of(self, label):
        return self.subsystem_dims[self.index(label)]

    def subspace(self, labels):
        """The space of the given labels, in this space's order."""
        idx = sorted(self.index(l) for l in labels)
        return HilbertSpace(tuple(self.subsystem_dims[i] for i in idx),
                            tuple(self.labels[i] for i in idx))

    def concat(self, other):
        return HilbertSpace(self.subsystem_dims + other.subsystem_dims,
                            self.labels + other.labels)


def single_space(dim, label='A'):
    return HilbertSpace((dim,), (label,))


class DensityOperator(object):

    """Hermitian, positive semidefinite, unit-trace matrix on a HilbertSpace."""

    def __init__(self, space, matrix, check=True):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise ValueError("matrix shape {s} doesn't match space dimension {d}".format(
                s=matrix.shape, d=space.dim))
        self.space = space
        self.matrix = matrix
        self.matrix.setflags(write=False)
        if check:
            self.validate()

    def validate(self):
        herm_err = np.abs(self.matrix - self.matrix.conj().T).max()
        if herm_err > HERMITIAN_TOL:
            raise ValueError("density matrix not Hermitian (max deviation %.3g)" % herm_err)
        trace = np.trace(self.matrix).real
        if abs(trace - 1) > TRACE_TOL:
            raise ValueError("density matrix trace is %.12g, not 1" % trace)
        min_eig = np.linalg.eigvalsh(hermitian_part(self.matrix)).min()
        if min_eig < -NEGATIVE_EIG_TOL:
            raise ValueError("density matrix has negative eigenvalue %.3g" % min_eig)

    @property
    def dim(self):
        return self.space.dim

    def purity(self):
        return float(np.einsum('ij,ji->', self.matrix, self.matrix).real)

    def __repr__(self):
        return "DensityOperator(dims={d}, labels={l})".format(d=self.space.subsystem_dims, l=self.space.labels)


class PureState(object):

    """Normalised state vector on a HilbertSpace."""

    def __init__(self, space, amplitudes, check=True):
        amplitudes = np.array(amplitudes, dtype=complex).ravel()
        if amplitudes.shape != (space.dim,):
            raise ValueError("got {n} amplitudes for a space of dimension {d}".format(
                n=amplitudes.size, d=space.dim))
        if check:
            norm2 = np.vdot(amplitudes, amplitudes).real
            if abs(norm2 - 1) > NORM_TOL:
                raise ValueError("state vector has squared norm %.15g, not 1" % norm2)
        self.space = space
        self.amplitudes = amplitudes
        self.amplitudes.setflags(write=False)

    def to_density(self):
        return DensityOperator(self.space, np.outer(self.amplitudes, self.amplitudes.conj()), check=False)

    def __repr__(self):
        return "PureState(dims={d}, labels={l})".format(d=self.space.subsystem_dims, l=self.space.labels)


def hermitian_part(matrix):
    return 0.5 * (matrix + matrix.conj().T)


def as_density(state):
    if isinstance(state, PureState):
        return state.to_density()
    return state


def tensor(a, b):
    """Kronecker product of two states of the same kind, a's labels first."""
    space = a.space.concat(b.space)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(space, np.kron(a.amplitudes, b.amplitudes), check=False)
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator(space, np.kron(a.matrix, b.matrix), check=False)
    raise ValueError("tensor needs two PureStates or two DensityOperators, got {a} and {b}".format(
        a=type(a).__name__, b=type(b).__name__))


def _tensor_view(rho):
    dims = rho.space.subsystem_dims
    return rho.matrix.reshape(dims + dims)


def partial_trace(rho, keep):
    """Trace out every subsystem not named in keep.

    :rho: DensityOperator (or PureState)
    :keep: iterable of labels to keep
    :returns: DensityOperator on the kept labels, in rho's label order
    """
    rho = as_density(rho)
    if isinstance(keep, str):
        keep = [keep]
    keep = set(keep)
    for label in keep:
        rho.space.index(label)

    n = len(rho.space.labels)
    letters = string.ascii_letters
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    out_row = []
    out_col = []
    for k, label in enumerate(rho.space.labels):
        if label in keep:
            out_row.append(row[k])
            out_col.append(col[k])
        else:
            col[k] = row[k]

    subscripts = '{r}{c}->{orow}{ocol}'.format(r=''.join(row), c=''.join(col),
                                                orow=''.join(out_row), ocol=''.join(out_col))
    reduced = np.einsum(subscripts, _tensor_view(rho))
    space = rho.space.subspace(keep)
    return DensityOperator(space, reduced.reshape(space.dim, space.dim), check=False)


def permute_subsystems(rho, labels):
    """Reorder tensor factors so that they follow `labels`."""
    rho = as_density(rho)
    labels = tuple(labels)
    if sorted(labels) != sorted(rho.space.labels):
        raise ValueError("{l} is not a permutation of {s}".format(l=labels, s=rho.space.labels))
    if labels == rho.space.labels:
        return rho
    perm = [rho.space.index(l) for l in labels]
    n = len(perm)
    moved = _tensor_view(rho).transpose(perm + [p + n for p in perm])
    space = HilbertSpace(tuple(rho.space.subsystem_dims[p] for p in perm), labels)
    return DensityOperator(space, moved.reshape(space.dim, space.dim), check=False)


def eig_hermitian(rho):
    """Eigen-decomposition with eigenvalues in descending order.

    :returns: (eigenvalues, eigenvectors as columns)
    """
    matrix = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    herm_err = np.abs(matrix - matrix.conj().T).max()
    if herm_err > HERMITIAN_TOL:
        raise ValueError("matrix not Hermitian (max deviation %.3g)" % herm_err)

    values, vectors = np.linalg.eigh(hermitian_part(matrix))
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def clamp_spectrum(values):
    """Clamp numerically negative eigenvalues to 0, reject real negatives."""
    values = np.asarray(values, dtype=float)
    if values.size and values.min() < -NEGATIVE_EIG_TOL:
        raise ValueError("eigenvalue %.3g is too negative for a density matrix" % values.min())
    values = np.clip(values, 0, None)
    values[values < ZERO_EIG_TOL] = 0
    return values


def spectrum_entropy(values, base=2):
    """-sum(l log l) of an already-validated distribution, 0 log 0 = 0."""
    values = np.asarray(values, dtype=float)
    nz = values[values > 0]
    if nz.size == 0:
        return 0.0
    return float(max(0.0, -np.sum(nz * np.log(nz)) * log_factor(base)))


def von_neumann_entropy(rho, base=2):
    """S(rho) = -tr(rho log rho), in bits by default."""
    values, _ = eig_hermitian(as_density(rho))
    return spectrum_entropy(clamp_spectrum(values), base)


def shannon_entropy(p, base=2):
    """Entropy of a probability vector, clamped and renormalised."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty probability vector")
    if p.min() < -ZERO_EIG_TOL:
        raise ValueError("probability %.3g is negative" % p.min())
    total = p.sum()
    if abs(total - 1) > 1e-6:
        raise ValueError("probabilities sum to %.12g, not 1" % total)
    p = np.clip(p, 0, None)
    return spectrum_entropy(p / p.sum(), base)


def trace_distance(rho, sigma):
    """(1/2) sum |eig(rho - sigma)|."""
    if rho.space != sigma.space:
        raise ValueError("trace distance between different spaces: {a} vs {b}".format(
            a=rho.space, b=sigma.space))
    diff = hermitian_part(rho.matrix - sigma.matrix)
    values = np.linalg.eigvalsh(diff)
    return float(min(1.0, 0.5 * np.abs(values).sum()))


def projector(space, amplitudes):
    """|v><v| for a normalised vector."""
    return PureState(space, amplitudes).to_density()


def basis_state(space, index):
    amplitudes = np.zeros(space.dim, dtype=complex)
    amplitudes[index] = 1
    return PureState(space, amplitudes)


def maximally_mixed(space):
    return DensityOperator(space, np.eye(space.dim, dtype=complex) / space.dim, check=False)


def random_pure_state(space, rng):
    """Haar-random pure state (normalised complex Gaussian vector)."""
    z = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return PureState(space, z / np.linalg.norm(z))


def random_density_operator(space, rng, rank=None):
    """Ginibre-ensemble mixed state of the given rank (full rank by default)."""
    rank = space.dim if rank is None else rank
    g = rng.standard_normal((space.dim, rank)) + 1j * rng.standard_normal((space.dim, rank))
    matrix = g @ g.conj().T
    matrix = hermitian_part(matrix / np.trace(matrix).real)
    return DensityOperator(space, matrix)


def random_unitary(dim, rng):
    return unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.ones((1, 1), dtype=complex)
