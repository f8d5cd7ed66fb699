"""Reference nonlinear circuits and their polynomial reformulations.

Two benchmarks are provided:

* a two-block diode circuit (capacitor parallel to a diode, blocks in
  series, current input) with its linearization, quadratic Carleman
  bilinearization and exact QB lifting;
* the nonlinear RC ladder with Shockley diodes, its exact 2n-dimensional QB
  lifting and its (n^2 + n)-dimensional Carleman bilinearization.
"""

from dataclasses import dataclass
from typing import Callable
import warnings

import numpy as np

from .core import LinearSystem, QBSystem
from .errors import DimensionCap, OverflowWarning, PoleHit

EXP_CLAMP = 700.0
CARLEMAN_MAX_N = 80


def _guarded_expm1(arg):
    """``exp(arg) - 1`` with the argument clamped at ``EXP_CLAMP``."""
    arg = np.asarray(arg, dtype=float)
    if np.any(arg > EXP_CLAMP):
        warnings.warn(f"exponent argument clamped at {EXP_CLAMP}",
                      OverflowWarning, stacklevel=3)
        arg = np.minimum(arg, EXP_CLAMP)
    return np.expm1(arg)


@dataclass(frozen=True)
class DiodeToyParams:
    C1: float = 1.0
    C2: float = 1.0
    Ir1: float = 1.0
    Ir2: float = 1.0
    Vt1: float = 1.0
    Vt2: float = 1.0

    def __post_init__(self):
        for name in ("C1", "C2", "Ir1", "Ir2", "Vt1", "Vt2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def a(self):
        return 1.0 / (self.C1 * self.Vt1)

    @property
    def b(self):
        return 1.0 / (self.C2 * self.Vt2)

    @property
    def c(self):
        return self.Ir1

    @property
    def d(self):
        return self.Ir2


@dataclass(frozen=True)
class LadderParams:
    n: int = 50
    iS: float = 1.0
    uP: float = 40.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("the ladder needs n >= 2 blocks")
        if not (self.iS > 0 and self.uP > 0):
            raise ValueError("iS and uP must be positive")

    def g(self, w):
        """Resistor plus Shockley diode current ``iS (exp(uP w) - 1) + w``."""
        return self.iS * _guarded_expm1(self.uP * np.asarray(w)) + w

    @property
    def dg0(self):
        return self.iS * self.uP + 1.0

    @property
    def ddg0(self):
        return self.iS * self.uP**2


@dataclass(frozen=True, eq=False)
class NonlinearModel:
    """``x' = rhs(x, u)``, ``y = output(x)``; ``output`` also accepts an
    ``(n, T)`` array of states."""

    n: int
    rhs: Callable
    output: Callable
    name: str = ""


def carleman_bilinear(A1, A2, b, c, provenance=""):
    """Quadratic Carleman bilinearization of ``x' = A1 x + A2 (x kron x) / 2
    + b u``, ``y = c x`` on the state ``[x; x kron x]``.

    Third-order terms produced by differentiating ``x kron x`` are dropped.
    """
    n = A1.shape[0]
    I = np.eye(n)
    b2 = b.reshape(n, 1)
    m = n + n * n
    A = np.zeros((m, m))
    A[:n, :n] = A1
    A[:n, n:] = 0.5 * A2
    A[n:, n:] = np.kron(A1, I) + np.kron(I, A1)
    N = np.zeros((m, m))
    N[n:, :n] = np.kron(b2, I) + np.kron(I, b2)
    B = np.concatenate([b, np.zeros(n * n)])
    C = np.concatenate([c, np.zeros(n * n)])
    return QBSystem(np.eye(m), A, None, N, B, C, symmetric=True,
                    provenance=provenance)


# -- diode toy circuit ------------------------------------------------------

def toy_nonlinear(params):
    a, b, c, d = params.a, params.b, params.c, params.d
    out = np.array([params.Vt1, params.Vt2])

    def rhs(x, u):
        e = _guarded_expm1(x)
        return np.array([a * u - a * c * e[0], b * u - b * d * e[1]])

    return NonlinearModel(2, rhs, lambda x: out @ x, name="toy-nonlinear")


def toy_linearized(params):
    a, b, c, d = params.a, params.b, params.c, params.d
    return LinearSystem(E=np.eye(2), A=np.diag([-a * c, -b * d]),
                        B=[a, b], C=[params.Vt1, params.Vt2])


def toy_carleman_bilinear(params):
    """6-state bilinear approximation on ``(x1, x2, x1^2, x1 x2, x2 x1,
    x2^2)``."""
    a, b, c, d = params.a, params.b, params.c, params.d
    A1 = np.diag([-a * c, -b * d])
    A2 = np.zeros((2, 4))
    A2[0, 0] = -a * c
    A2[1, 3] = -b * d
    return carleman_bilinear(A1, A2, np.array([a, b]),
                             np.array([params.Vt1, params.Vt2]),
                             provenance="toy-carleman")


def toy_lifted_qb(params):
    """Exact QB form on ``(x1, x2, exp(x1) - 1, exp(x2) - 1)``."""
    a, b, c, d = params.a, params.b, params.c, params.d
    A = np.array([[0, 0, -a * c, 0],
                  [0, 0, 0, -b * d],
                  [0, 0, -a * c, 0],
                  [0, 0, 0, -b * d]], dtype=float)
    N = np.diag([0.0, 0.0, a, b])
    Q = np.zeros((4, 16))
    Q[2, 2 * 4 + 2] = -a * c
    Q[3, 3 * 4 + 3] = -b * d
    return QBSystem(np.eye(4), A, Q, N, [a, b, a, b],
                    [params.Vt1, params.Vt2, 0.0, 0.0], symmetric=True,
                    provenance="toy-lifted")


def _checked(den):
    if den == 0:
        raise PoleHit("evaluation point is a pole")
    return den


def toy_h1_closed_form(params, s):
    p = params
    return (p.Vt1 / _checked(p.C1 * p.Vt1 * s + p.Ir1)
            + p.Vt2 / _checked(p.C2 * p.Vt2 * s + p.Ir2))


def toy_h2_diag_closed_form(params, s):
    """``H2(s, s)`` of the diode circuit."""
    p = params
    total = 0.0
    for C, Ir, Vt in ((p.C1, p.Ir1, p.Vt1), (p.C2, p.Ir2, p.Vt2)):
        den = 2.0 * (Ir + C * Vt * s)**2 * (Ir + 2.0 * C * Vt * s)
        total -= Ir * Vt / _checked(den)
    return total


# -- RC ladder --------------------------------------------------------------

def ladder_incidence(n):
    """Branch map ``w = P x``: ``w[0] = x[0]`` (diode to ground) and
    ``w[k] = x[k-1] - x[k]``."""
    P = np.eye(n)
    P[np.arange(1, n), np.arange(n - 1)] = 1.0
    P[np.arange(1, n), np.arange(1, n)] = -1.0
    return P


def _branches(x):
    w = np.empty_like(x)
    w[0] = x[0]
    w[1:] = x[:-1] - x[1:]
    return w


def ladder_nonlinear(params):
    n = params.n

    def rhs(x, u):
        gw = params.g(_branches(np.asarray(x, dtype=float)))
        dx = np.empty(n)
        dx[0] = -gw[0] - gw[1] + u
        dx[1:-1] = gw[1:-1] - gw[2:]
        dx[-1] = gw[-1]
        return dx

    return NonlinearModel(n, rhs, lambda x: np.asarray(x)[0],
                          name="ladder-nonlinear")


def ladder_lift_state(params, x):
    """Map node voltages ``x`` to the lifted state ``(x, z)`` with
    ``z = exp(uP * P x) - 1``."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([x, _guarded_expm1(params.uP * _branches(x))])


def ladder_lifted_qb(params):
    """Exact 2n-state QB form of the ladder.

    With branch voltages ``w = P x`` and ``z = exp(uP w) - 1`` the diode law
    becomes ``g(w) = iS z + w`` and::

        x' = -P^T P x - iS P^T z + e1 u
        z' = uP (1 + z) * w'        (elementwise; w' = P x' is affine)

    so ``x'`` is linear and ``z'`` has quadratic ``z * w'`` and bilinear
    ``z * u`` terms.
    """
    n, iS, uP = params.n, params.iS, params.uP
    m = 2 * n
    P = ladder_incidence(n)
    Ax = np.hstack([-P.T @ P, -iS * P.T])        # x' = Ax [x; z] + e1 u
    Mw = P @ Ax                                  # w' = Mw [x; z] + P e1 u
    bw = P[:, 0]
    A = np.vstack([Ax, uP * Mw])
    B = np.concatenate([np.eye(n)[0], uP * bw])
    N = np.zeros((m, m))
    Q = np.zeros((m, m, m))
    for j in range(n):
        N[n + j, n + j] = uP * bw[j]
        # z_j * (Mw[j] . xi), split evenly over (n+j, k) and (k, n+j)
        Q[n + j, n + j, :] += 0.5 * uP * Mw[j]
        Q[n + j, :, n + j] += 0.5 * uP * Mw[j]
    C = np.eye(m)[0]
    return QBSystem(np.eye(m), A, Q.reshape(m, m * m), N, B, C,
                    symmetric=True, provenance=f"ladder-lifted-n{n}")


def ladder_carleman_bilinear(params):
    """(n^2 + n)-state bilinear approximation from the Taylor terms of the
    ladder dynamics at the origin."""
    n = params.n
    if n > CARLEMAN_MAX_N:
        raise DimensionCap(f"n = {n} exceeds the Carleman cap "
                           f"{CARLEMAN_MAX_N} ({n * n + n} states)")
    P = ladder_incidence(n)
    A1 = -params.dg0 * (P.T @ P)
    A2 = -params.ddg0 * np.einsum("ji,jk,jl->ikl", P, P, P).reshape(n, n * n)
    e1 = np.eye(n)[0]
    return carleman_bilinear(A1, A2, e1, e1,
                             provenance=f"ladder-carleman-n{n}")
