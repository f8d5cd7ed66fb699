"""Least-squares inference of the quadratic and bilinear operators.

Given a fitted linear realization ``(E, A, B, C)`` of order ``r`` and samples
``v_i = H2(z1_i, z2_i)``, every sample yields one linear equation in the
unknowns ``z = [vec(Q); vec(N) / 2]`` (row-major ``vec``)::

    v_i = (O_i kron Rq_i^T) vec(Q) + (O_i kron Rb_i^T) vec(N) / 2

with ``O = C Phi(z1+z2)``, ``Rq = Phi(z1)B kron Phi(z2)B`` and
``Rb = Phi(z1)B + Phi(z2)B``.
"""

from dataclasses import dataclass
from typing import NamedTuple
import warnings

import numpy as np

from .core import QBSystem, Resolvent, eval_H2, symmetrize_Q
from .errors import EmptyGrid, InsufficientData, ShapeError, SingularResolvent

DEFAULT_TSVD_TOL = 1e-10


class RegressorRow(NamedTuple):
    O: np.ndarray
    Rq: np.ndarray
    Rb: np.ndarray


@dataclass(frozen=True, eq=False)
class KernelSamples:
    """H2 values on the sample set ``pairs`` (shape ``(K, 2)``)."""

    pairs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=complex).reshape(-1, 2)
        values = np.asarray(self.values, dtype=complex).reshape(-1)
        if pairs.shape[0] != values.shape[0]:
            raise ShapeError(
                f"{pairs.shape[0]} pairs but {values.shape[0]} values")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "values", values)

    @property
    def K(self):
        return self.values.shape[0]


def tensor_grid(m1, m2, lo, hi, conjugates=True):
    """Pairs ``(i w_a, i w_b)`` on an ``m1 x m2`` log-spaced tensor grid over
    ``[10**lo, 10**hi]`` rad/s, optionally followed by their conjugates."""
    if m1 <= 0 or m2 <= 0:
        raise EmptyGrid(f"grid {m1} x {m2} is empty")
    w1 = 1j * np.logspace(lo, hi, m1)
    w2 = 1j * np.logspace(lo, hi, m2)
    pairs = np.stack(np.meshgrid(w1, w2, indexing="ij"), -1).reshape(-1, 2)
    if conjugates:
        pairs = np.concatenate([pairs, pairs.conj()])
    return pairs


def sample_H2(sys, pairs):
    """Evaluate ``H2`` of ``sys`` on every pair; errors name the pair index."""
    pairs = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    values = np.empty(len(pairs), dtype=complex)
    for i, (s1, s2) in enumerate(pairs):
        try:
            values[i] = eval_H2(sys, s1, s2)
        except SingularResolvent as exc:
            raise SingularResolvent(exc.s, i) from None
    return KernelSamples(pairs, values)


def build_regressors(linsys, pair, index=None):
    z1, z2 = pair
    a = Resolvent(linsys, z1, index).solve(linsys.B)
    b = a if z2 == z1 else Resolvent(linsys, z2, index).solve(linsys.B)
    O = Resolvent(linsys, z1 + z2, index).solve_left(linsys.C)
    return RegressorRow(O=O, Rq=np.kron(a, b), Rb=a + b)


def assemble_T(linsys, pairs):
    """Regressor matrix with rows ``[O kron Rq^T, O kron Rb^T]``."""
    pairs = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    if len(pairs) == 0:
        raise EmptyGrid("no sample pairs")
    r = linsys.n
    T = np.empty((len(pairs), r**3 + r**2), dtype=complex)
    for i, pair in enumerate(pairs):
        row = build_regressors(linsys, pair, index=i)
        T[i, :r**3] = np.kron(row.O, row.Rq)
        T[i, r**3:] = np.kron(row.O, row.Rb)
    return T


def vec_rowmajor(X):
    return np.asarray(X).reshape(-1)


def unvec_rowmajor(x, m, n):
    return np.asarray(x).reshape(m, n)


def tsvd_solve(M, b, tol):
    """Minimum-norm least-squares solution with singular values below
    ``tol * sigma_1`` discarded. Returns ``(x, rank, sigma)``."""
    U, sigma, Vh = np.linalg.svd(M, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0:
        return np.zeros(M.shape[1]), 0, sigma
    rank = int(np.count_nonzero(sigma > tol * sigma[0]))
    coef = (U[:, :rank].conj().T @ b) / sigma[:rank]
    return Vh[:rank].conj().T @ coef, rank, sigma


def solve_operators(T, v, r, tol=DEFAULT_TSVD_TOL):
    """Solve ``T z = v`` for a real ``z`` by stacking real and imaginary parts.

    Returns ``(Q, N, diagnostics)``; ``Q`` is symmetrized.
    """
    T = np.asarray(T)
    v = np.asarray(v, dtype=complex)
    if T.shape != (v.shape[0], r**3 + r**2):
        raise ShapeError(f"T has shape {T.shape}, expected "
                         f"({v.shape[0]}, {r**3 + r**2})")
    diag = {"K": int(v.shape[0]), "r": int(r), "zero_data": False}
    vnorm = np.linalg.norm(v)
    if vnorm == 0:
        diag.update(rank=0, residual_rel=0.0, sigma=[], zero_data=True)
        return np.zeros((r, r * r)), np.zeros((r, r)), diag
    M = np.vstack([T.real, T.imag])
    rhs = np.concatenate([v.real, v.imag])
    z, rank, sigma = tsvd_solve(M, rhs, tol)
    Q = symmetrize_Q(unvec_rowmajor(z[:r**3], r, r * r))
    N = 2.0 * unvec_rowmajor(z[r**3:], r, r)
    diag.update(rank=rank,
                residual_rel=float(np.linalg.norm(T @ z - v) / vnorm),
                sigma=sigma.tolist())
    return Q, N, diag


def fit_qb(linsys, samples, tol=DEFAULT_TSVD_TOL, return_diagnostics=False):
    """Complete a real linear realization to a QB system from H2 samples."""
    if not linsys.is_real:
        raise ValueError("the linear realization must be real")
    if samples.K == 0:
        raise EmptyGrid("no kernel samples")
    r = linsys.n
    if samples.K < r**3 + r**2:
        warnings.warn(f"K = {samples.K} < r^3 + r^2 = {r**3 + r**2}",
                      InsufficientData, stacklevel=2)
    T = assemble_T(linsys, samples.pairs)
    Q, N, diag = solve_operators(T, samples.values, r, tol)
    diag["insufficient_data"] = samples.K < r**3 + r**2
    qb = QBSystem(linsys.E, linsys.A, Q, N, linsys.B, linsys.C,
                  symmetric=True, provenance="fit_qb")
    if return_diagnostics:
        return qb, diag
    return qb
