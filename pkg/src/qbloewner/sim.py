"""Time-domain simulation with the Dormand-Prince 4(5) pair.

The integrator is scipy's ``RK45`` (Dormand-Prince coefficients, embedded
error control, quartic dense output); outputs are read off its interpolant
on a uniform grid.
"""

from dataclasses import dataclass
from typing import Optional
import warnings

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.integrate import solve_ivp, trapezoid

from .core import LinearSystem, QBSystem
from .errors import (GridMismatch, IntegrationFailure, OverflowWarning,
                     StepSizeUnderflow)
from .models import NonlinearModel

DEFAULT_NPTS = 2001


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    t_span: tuple = (0.0, 10.0)
    max_step: float = np.inf
    n_grid: int = DEFAULT_NPTS
    dense_output_grid: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        t0, t1 = self.t_span
        if not t1 > t0:
            raise ValueError("t_span must satisfy t1 > t0")

    def grid(self):
        if self.dense_output_grid is not None:
            return np.asarray(self.dense_output_grid, dtype=float)
        return np.linspace(*self.t_span, self.n_grid)


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    x: Optional[np.ndarray] = None
    valid: bool = True

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if t.ndim != 1 or y.shape != t.shape:
            raise ValueError("t and y must be 1-D arrays of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t must be strictly increasing")
        if self.x is not None and np.shape(self.x)[-1] != t.size:
            raise ValueError("x must have one column per time point")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)


def _maybe_sparse(M, density=0.1):
    if M is None:
        return None
    if M.size > 400 and np.count_nonzero(M) < density * M.size:
        return sp.csr_matrix(M)
    return M


def _system_rhs(sys, u):
    """Right-hand side closure for a linear or QB system."""
    n = sys.n
    A = _maybe_sparse(sys.A)
    B = sys.B
    N = Q = None
    if isinstance(sys, QBSystem):
        N = None if not np.any(sys.N) else _maybe_sparse(sys.N)
        Q = None if sys.is_bilinear else _maybe_sparse(sys.Q)
    lu = None if np.array_equal(sys.E, np.eye(n)) else sla.lu_factor(sys.E)

    def f(t, x):
        ut = u(t)
        dx = A @ x + B * ut
        if N is not None:
            dx = dx + (N @ x) * ut
        if Q is not None:
            dx = dx + Q @ np.outer(x, x).reshape(-1)
        if lu is not None:
            dx = sla.lu_solve(lu, dx)
        return dx

    return f


def integrate(model, u, x0=None, cfg=None, keep_states=False):
    """Integrate ``model`` under input ``u(t)`` and sample its output.

    ``model`` is a `NonlinearModel`, `LinearSystem` or `QBSystem`. A
    trajectory on which the exponent guard fired is returned with
    ``valid=False``.
    """
    if not isinstance(model, (NonlinearModel, LinearSystem, QBSystem)):
        raise TypeError(f"cannot integrate {type(model).__name__}")
    cfg = cfg or IntegratorConfig()
    n = model.n
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (n,) or not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be a finite vector of the state dimension")
    if isinstance(model, NonlinearModel):
        def f(t, x):
            return model.rhs(x, u(t))
        output = model.output
    else:
        if not np.isrealobj(model.A):
            raise ValueError("only real systems can be simulated")
        f = _system_rhs(model, u)
        output = model.C.__matmul__

    grid = cfg.grid()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", OverflowWarning)
        sol = solve_ivp(f, (grid[0], grid[-1]), x0, method="RK45",
                        t_eval=grid, rtol=cfg.rel_tol, atol=cfg.abs_tol,
                        max_step=cfg.max_step)
    overflow = [w for w in caught if issubclass(w.category, OverflowWarning)]
    for w in caught:
        if w not in overflow:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    if overflow:
        warnings.warn(f"{len(overflow)} clamped exponent evaluations; "
                      "trajectory flagged invalid", OverflowWarning,
                      stacklevel=2)
    if sol.status != 0:
        if "step size" in sol.message.lower():
            raise StepSizeUnderflow(f"{sol.message} (t = {sol.t[-1]:g})")
        raise IntegrationFailure(sol.message)
    y = np.asarray(output(sol.y), dtype=float)
    return Trajectory(sol.t, y, sol.y if keep_states else None,
                      valid=not overflow)


def output_error(a, b):
    """``(max |ya - yb|, ||ya - yb||_L2)`` with the trapezoidal rule."""
    if a.t.shape != b.t.shape or not np.array_equal(a.t, b.t):
        raise GridMismatch("trajectories are sampled on different grids")
    d = a.y - b.y
    linf = float(np.abs(d).max(initial=0.0))
    l2 = float(np.sqrt(trapezoid(d * d, a.t)))
    return linf, l2


def make_input(spec):
    """Parse an input specification.

    ``const:A``, ``expdecay:A,tau`` (``A exp(-t / tau)``) and
    ``twotone:A,f1,f2`` (``A (cos(2 pi f1 t) + cos(2 pi f2 t))``, f in Hz);
    ``zero`` is accepted as a shorthand for ``const:0``.
    """
    kind, _, rest = spec.partition(":")
    try:
        args = [float(v) for v in rest.split(",")] if rest else []
    except ValueError:
        raise ValueError(f"malformed input spec {spec!r}") from None
    if kind == "zero" and not args:
        return lambda t: 0.0
    if kind == "const" and len(args) == 1:
        A, = args
        return lambda t: A
    if kind == "expdecay" and len(args) == 2:
        A, tau = args
        return lambda t: A * np.exp(-t / tau)
    if kind == "twotone" and len(args) == 3:
        A, f1, f2 = args
        return lambda t: A * (np.cos(2 * np.pi * f1 * t)
                              + np.cos(2 * np.pi * f2 * t))
    raise ValueError(f"malformed input spec {spec!r}")
