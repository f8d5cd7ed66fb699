"""Linear and quadratic-bilinear (QB) state-space systems.

A QB system reads::

    E x'(t) = A x(t) + Q (x(t) kron x(t)) + N x(t) u(t) + B u(t)
       y(t) = C x(t)

with a single input and a single output. ``Q`` is stored densely as an
``n x n**2`` matrix whose column ``j1 * n + j2`` multiplies ``x[j1] * x[j2]``
(row-major Kronecker ordering).
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional
import warnings

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import ShapeError, SingularE, SingularResolvent

E_RCOND_TOL = 1e-12


class ComplexSample(NamedTuple):
    """One frequency-domain measurement ``value = H(s)``."""

    s: complex
    value: complex


def _as_matrix(X, name, shape):
    X = np.asarray(X)
    if X.ndim != 2 or X.shape != shape:
        raise ShapeError(f"{name} must have shape {shape}, got {X.shape}")
    return X


def _as_vector(x, name, n):
    x = np.asarray(x)
    if x.ndim == 2 and 1 in x.shape:
        x = x.reshape(-1)
    if x.shape != (n,):
        raise ShapeError(f"{name} must hold {n} entries, got shape {x.shape}")
    return x


def check_nonsingular_E(E):
    """Raise `SingularE` if ``sigma_min(E) < 1e-12 * sigma_max(E)``."""
    if not np.any(E - np.diag(np.diagonal(E))):
        s = np.abs(np.diagonal(E))
    else:
        s = sla.svdvals(E)
    if s.size and (s.max() == 0 or s.min() < E_RCOND_TOL * s.max()):
        raise SingularE("E is numerically singular")


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Descriptor system ``E x' = A x + B u, y = C x``.

    ``B`` and ``C`` are kept as 1-D arrays of length ``n``. Matrices may be
    complex (intermediate Loewner realizations); reference and fitted models
    are real.
    """

    E: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise ShapeError(f"A must be square and non-empty, got {A.shape}")
        n = A.shape[0]
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "E", _as_matrix(self.E, "E", (n, n)))
        object.__setattr__(self, "B", _as_vector(self.B, "B", n))
        object.__setattr__(self, "C", _as_vector(self.C, "C", n))
        check_nonsingular_E(self.E)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def is_real(self):
        return all(np.isrealobj(M) for M in (self.E, self.A, self.B, self.C))


@dataclass(frozen=True, eq=False)
class QBSystem:
    """Quadratic-bilinear system ``(E, A, Q, N, B, C)``.

    ``Q=None`` denotes the zero quadratic operator; this is how the large
    Carleman bilinearizations avoid an ``n x n**2`` zero matrix.
    """

    E: np.ndarray
    A: np.ndarray
    Q: Optional[np.ndarray]
    N: np.ndarray
    B: np.ndarray
    C: np.ndarray
    symmetric: bool = False
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        A = np.asarray(self.A)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise ShapeError(f"A must be square and non-empty, got {A.shape}")
        n = A.shape[0]
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "E", _as_matrix(self.E, "E", (n, n)))
        object.__setattr__(self, "N", _as_matrix(self.N, "N", (n, n)))
        if self.Q is not None:
            object.__setattr__(self, "Q", _as_matrix(self.Q, "Q", (n, n * n)))
            if self.symmetric and not is_symmetric_Q(self.Q):
                raise ValueError("symmetric=True but Q(v kron w) != Q(w kron v)")
        object.__setattr__(self, "B", _as_vector(self.B, "B", n))
        object.__setattr__(self, "C", _as_vector(self.C, "C", n))
        check_nonsingular_E(self.E)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def is_bilinear(self):
        return self.Q is None or not np.any(self.Q)

    def linear_part(self):
        return LinearSystem(self.E, self.A, self.B, self.C)


def to_standard_form(sys):
    """Return an equivalent realization with ``E = I``.

    The state equation is multiplied from the left by ``E^{-1}``; transfer
    functions of every order are unchanged.
    """
    n = sys.n
    if np.array_equal(sys.E, np.eye(n)):
        return sys
    lu = sla.lu_factor(sys.E)
    I = np.eye(n, dtype=sys.E.dtype)
    A = sla.lu_solve(lu, sys.A)
    B = sla.lu_solve(lu, sys.B)
    if isinstance(sys, LinearSystem):
        return LinearSystem(I, A, B, sys.C)
    Q = None if sys.Q is None else sla.lu_solve(lu, sys.Q)
    return QBSystem(I, A, Q, sla.lu_solve(lu, sys.N), B, sys.C,
                    symmetric=sys.symmetric, provenance=sys.provenance)


class Resolvent:
    """LU factorization of ``s E - A`` for repeated solves at fixed ``s``."""

    def __init__(self, sys, s, index=None):
        M = s * sys.E - sys.A
        n = M.shape[0]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            self._lu = sla.lu_factor(M, check_finite=True)
        lu = self._lu[0]
        if not np.all(np.diagonal(lu)):
            raise SingularResolvent(s, index)
        gecon, = lapack.get_lapack_funcs(("gecon",), (lu,))
        rcond, _ = gecon(lu, np.linalg.norm(M, 1), norm="1")
        if not rcond > max(n, 10) * np.finfo(float).eps:
            raise SingularResolvent(s, index)
        self.s = s

    def solve(self, v):
        """``(s E - A)^{-1} v``"""
        return sla.lu_solve(self._lu, v)

    def solve_left(self, c):
        """``c (s E - A)^{-1}`` for a row vector ``c``."""
        return sla.lu_solve(self._lu, c, trans=1)


def resolvent_apply(sys, s, v):
    """Compute ``(s E - A)^{-1} v`` by an LU solve."""
    v = _as_vector(v, "v", sys.n)
    return Resolvent(sys, s).solve(v)


def eval_H1(sys, s1):
    """First transfer function ``C (s1 E - A)^{-1} B``."""
    return complex(sys.C @ resolvent_apply(sys, s1, sys.B))


def eval_H2(sys, s1, s2):
    """Second symmetric generalized transfer function of a QB system.

    ``H2(s1, s2) = C Phi(s1+s2) [Q (Phi(s1)B kron Phi(s2)B)
    + 1/2 N (Phi(s1)B + Phi(s2)B)]`` with ``Phi(s) = (s E - A)^{-1}``.
    """
    a = resolvent_apply(sys, s1, sys.B)
    b = a if s2 == s1 else resolvent_apply(sys, s2, sys.B)
    rhs = 0.5 * (sys.N @ (a + b))
    if sys.Q is not None:
        rhs = rhs + quad_apply(sys.Q, a, b)
    return complex(sys.C @ resolvent_apply(sys, s1 + s2, rhs))


def quad_apply(Q, v, w):
    """Return ``Q (v kron w)``.

    The rank-one product ``v[j1] * w[j2]`` is laid out row-major (``j1``
    outer, ``j2`` inner), i.e. exactly as ``np.kron(v, w)``, so the result is
    bit-identical to the explicit Kronecker path.
    """
    Q = np.asarray(Q)
    v = np.asarray(v)
    w = np.asarray(w)
    n = v.shape[0]
    if v.shape != (n,) or w.shape != (n,) or Q.shape != (Q.shape[0], n * n):
        raise ShapeError(
            f"incompatible shapes Q{Q.shape}, v{v.shape}, w{w.shape}")
    return Q @ np.outer(v, w).reshape(-1)


def symmetrize_Q(Q):
    """Average ``Q`` over the perfect shuffle of its column pairs.

    The result satisfies ``Q'(v kron w) = Q'(w kron v)`` and agrees with ``Q``
    on symmetric arguments ``v kron v``.
    """
    Q = np.asarray(Q)
    m, nn = Q.shape
    n = int(round(np.sqrt(nn)))
    if n * n != nn:
        raise ShapeError(f"Q must have n**2 columns, got {nn}")
    Q3 = Q.reshape(m, n, n)
    return (0.5 * (Q3 + Q3.transpose(0, 2, 1))).reshape(m, nn)


def is_symmetric_Q(Q, rtol=1e-12):
    Q = np.asarray(Q)
    Qs = symmetrize_Q(Q)
    scale = max(np.abs(Q).max(initial=0.0), 1.0)
    return bool(np.abs(Q - Qs).max(initial=0.0) <= rtol * scale)
