"""Loewner-framework fitting of the linear subsystem from H1 samples."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import ComplexSample, LinearSystem, eval_H1, to_standard_form
from .errors import (DuplicateFrequency, EmptyPencil, MinimumCount,
                     NotConjugateClosed, OddCount, PartitionError)

DEFAULT_TOL = 1e-12
_CONJ_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class InterpolationData:
    """Right data ``(lam_j, w_j)`` and left data ``(mu_i, v_i)``."""

    right_points: np.ndarray
    right_values: np.ndarray
    left_points: np.ndarray
    left_values: np.ndarray

    def __post_init__(self):
        for name in ("right_points", "right_values", "left_points",
                     "left_values"):
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=complex))
        k = self.right_points.shape[0]
        if not (self.right_values.shape == self.left_points.shape
                == self.left_values.shape == (k,)):
            raise PartitionError("left and right data must have equal size")
        if k and np.any(self.left_points[:, None] == self.right_points[None, :]):
            raise DuplicateFrequency("left and right points must be disjoint")

    @property
    def k(self):
        return self.right_points.shape[0]


@dataclass(frozen=True, eq=False)
class LoewnerPencil:
    L: np.ndarray
    Ls: np.ndarray
    V: np.ndarray
    W: np.ndarray

    @property
    def k(self):
        return self.L.shape[0]


class Truncation(NamedTuple):
    r: int
    Xr: np.ndarray
    Yr: np.ndarray
    singular_values: np.ndarray


def imag_axis_samples(count, lo, hi):
    """Frequencies ``+-i w`` with ``count // 2`` values of ``w`` log-spaced
    over ``[10**lo, 10**hi]``; conjugates are adjacent, positive first."""
    if count % 2:
        raise OddCount("sample count must be even (conjugate pairs)")
    w = np.logspace(lo, hi, count // 2)
    s = np.empty(count, dtype=complex)
    s[0::2] = 1j * w
    s[1::2] = -1j * w
    return s


def sample_H1(sys, points):
    return [ComplexSample(complex(s), eval_H1(sys, s)) for s in points]


def _conjugate_units(points, values=None):
    """Group indices into conjugate pairs ``[p, q]`` and real singletons."""
    points = np.asarray(points, dtype=complex)
    scale = np.abs(points).max(initial=1.0)
    used = np.zeros(len(points), bool)
    units = []
    for p in range(len(points)):
        if used[p]:
            continue
        used[p] = True
        s = points[p]
        if abs(s.imag) <= _CONJ_RTOL * scale:
            units.append([p])
            continue
        d = np.abs(points - np.conj(s))
        d[used] = np.inf
        q = int(np.argmin(d))
        if d[q] > _CONJ_RTOL * scale:
            units.append([p])
            continue
        if values is not None:
            vs, vq = values[p], values[q]
            if abs(vq - np.conj(vs)) > 1e-10 * max(abs(vs), 1e-300):
                raise NotConjugateClosed(
                    f"values at {s} and {points[q]} are not conjugate")
        used[q] = True
        # positive imaginary part first
        units.append([p, q] if s.imag > 0 else [q, p])
    return units


def partition_samples(samples, scheme="alternating"):
    """Split samples into disjoint right and left sets of equal size.

    Samples are ordered by ``|Im s|`` (then ``Re s``) and grouped into
    conjugate pairs. ``"alternating"`` deals the groups out right, left,
    right, ...; ``"half-split"`` puts the first half on the right.
    """
    samples = [ComplexSample(complex(s), complex(v)) for s, v in samples]
    if len(samples) % 2:
        raise OddCount(f"need an even number of samples, got {len(samples)}")
    if len(samples) < 4:
        raise MinimumCount(f"need at least 4 samples, got {len(samples)}")
    pts = np.array([x.s for x in samples])
    if len(np.unique(pts)) != len(pts):
        raise DuplicateFrequency("sample frequencies must be distinct")
    order = sorted(range(len(samples)),
                   key=lambda i: (abs(pts[i].imag), pts[i].real, -pts[i].imag))
    samples = [samples[i] for i in order]
    pts = pts[order]
    units = _conjugate_units(pts)
    units.sort(key=min)
    if scheme == "alternating":
        right = [u for i, u in enumerate(units) if i % 2 == 0]
        left = [u for i, u in enumerate(units) if i % 2 == 1]
    elif scheme == "half-split":
        total, acc, cut = len(samples), 0, 0
        while cut < len(units) and acc < total // 2:
            acc += len(units[cut])
            cut += 1
        right, left = units[:cut], units[cut:]
    else:
        raise ValueError(f"unknown partition scheme {scheme!r}")
    ri = [i for u in right for i in u]
    li = [i for u in left for i in u]
    if len(ri) != len(li):
        raise PartitionError(
            f"cannot balance partition ({len(ri)} right vs {len(li)} left); "
            "use a multiple of 4 samples for conjugate-paired data")
    return InterpolationData(
        right_points=[samples[i].s for i in ri],
        right_values=[samples[i].value for i in ri],
        left_points=[samples[i].s for i in li],
        left_values=[samples[i].value for i in li],
    )


def build_pencil(data):
    """Loewner and shifted Loewner matrices with data vectors ``V, W``."""
    lam, w = data.right_points, data.right_values
    mu, v = data.left_points, data.left_values
    den = mu[:, None] - lam[None, :]
    L = (v[:, None] - w[None, :]) / den
    Ls = (mu[:, None] * v[:, None] - lam[None, :] * w[None, :]) / den
    return LoewnerPencil(L, Ls, v.copy(), w.copy())


def svd_truncate(pencil, tol=DEFAULT_TOL, rmax=None):
    """Choose the order ``r`` and the projection bases.

    ``Xr`` spans the leading left singular vectors of ``[L, Ls]``, ``Yr`` the
    leading right singular vectors of ``[L; Ls]``. ``r`` counts singular
    values of ``[L, Ls]`` with ``sigma / sigma_1 >= tol``, capped at ``rmax``.
    """
    k = pencil.k
    if k == 0:
        raise EmptyPencil("pencil has no data")
    rmax = k if rmax is None else min(int(rmax), k)
    U, sigma, _ = np.linalg.svd(np.hstack([pencil.L, pencil.Ls]))
    _, _, Vh = np.linalg.svd(np.vstack([pencil.L, pencil.Ls]))
    if sigma[0] == 0:
        r = 0
    else:
        r = min(int(np.count_nonzero(sigma / sigma[0] >= tol)), rmax)
    return Truncation(r, U[:, :r], Vh[:r].conj().T, sigma)


def reduce(pencil, Xr, Yr):
    """Projected Loewner realization of order ``r = Xr.shape[1]``."""
    if Xr.shape[1] != Yr.shape[1]:
        raise ValueError("Xr and Yr must have the same number of columns")
    Xh = Xr.conj().T
    return LinearSystem(E=-Xh @ pencil.L @ Yr, A=-Xh @ pencil.Ls @ Yr,
                        B=Xh @ pencil.V, C=pencil.W @ Yr)


def loewner_realization(pencil):
    """Unprojected model ``(-L, -Ls, V, W)``; needs a nonsingular ``L``."""
    return LinearSystem(-pencil.L, -pencil.Ls, pencil.V, pencil.W)


def conjugate_transform(points, values=None):
    """Unitary ``J`` with blocks ``[[1, -1j], [1, 1j]] / sqrt(2)`` on every
    conjugate pair of ``points``; identity on real points."""
    points = np.asarray(points, dtype=complex)
    k = len(points)
    J = np.zeros((k, k), dtype=complex)
    for u in _conjugate_units(points, values):
        if len(u) == 1:
            if abs(points[u[0]].imag) > _CONJ_RTOL * np.abs(points).max():
                raise NotConjugateClosed(
                    f"{points[u[0]]} has no conjugate partner")
            J[u[0], u[0]] = 1.0
            continue
        p, q = u
        J[p, p], J[p, q] = 1.0, -1j
        J[q, p], J[q, q] = 1.0, 1j
        J[[p, q], :] /= np.sqrt(2.0)
    return J


def _drop_imag(M, name, rtol=1e-10):
    M = np.asarray(M)
    scale = max(np.abs(M).max(initial=0.0), 1e-300)
    if np.abs(M.imag).max(initial=0.0) > rtol * scale:
        raise NotConjugateClosed(f"{name} is not real after transformation")
    return np.ascontiguousarray(M.real)


def realify_pencil(pencil, data):
    """Real pencil ``(Jl^H L Jr, Jl^H Ls Jr, Jl^H V, W Jr)``."""
    Jr = conjugate_transform(data.right_points, data.right_values)
    Jl = conjugate_transform(data.left_points, data.left_values)
    JlH = Jl.conj().T
    return LoewnerPencil(L=_drop_imag(JlH @ pencil.L @ Jr, "L"),
                         Ls=_drop_imag(JlH @ pencil.Ls @ Jr, "Ls"),
                         V=_drop_imag(JlH @ pencil.V, "V"),
                         W=_drop_imag(pencil.W @ Jr, "W"))


def realify(sys, data):
    """Real realization of a complex Loewner model in data coordinates.

    ``sys`` must be indexed like ``data`` (rows by left points, columns by
    right points), e.g. the output of `loewner_realization`. Real systems are
    returned unchanged.
    """
    if sys.is_real:
        return sys
    if sys.n != data.k:
        raise ValueError(
            f"system order {sys.n} does not match the data size {data.k}; "
            "realify the pencil before projecting instead")
    Jr = conjugate_transform(data.right_points, data.right_values)
    Jl = conjugate_transform(data.left_points, data.left_values)
    JlH = Jl.conj().T
    return LinearSystem(E=_drop_imag(JlH @ sys.E @ Jr, "E"),
                        A=_drop_imag(JlH @ sys.A @ Jr, "A"),
                        B=_drop_imag(JlH @ sys.B, "B"),
                        C=_drop_imag(sys.C @ Jr, "C"))


def fit_linear(samples, tol=DEFAULT_TOL, rmax=None, scheme="alternating",
               real=True, standard=True):
    """Partition, build, (realify), truncate and project.

    Returns the reduced `LinearSystem` and the `Truncation` record. With
    ``standard=True`` the result is brought to ``E = I``; the Loewner ``E``
    is typically ill-conditioned and a badly scaled basis spoils the
    minimum-norm operator fit downstream.
    """
    data = partition_samples(samples, scheme)
    pencil = build_pencil(data)
    if real:
        pencil = realify_pencil(pencil, data)
    trunc = svd_truncate(pencil, tol, rmax)
    if trunc.r == 0:
        raise EmptyPencil("no singular value above tolerance")
    sys = reduce(pencil, trunc.Xr, trunc.Yr)
    if standard:
        sys = to_standard_form(sys)
    return sys, trunc
