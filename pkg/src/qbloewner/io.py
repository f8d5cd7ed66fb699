"""JSON model files and CSV sample/trajectory files."""

import csv
import json

import numpy as np

from .core import ComplexSample, LinearSystem, QBSystem
from .qbfit import KernelSamples

FLOAT_FMT = "%.17g"


def _real_list(M, name):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.any(M.imag):
            raise ValueError(f"{name} is complex; realify before saving")
        M = M.real
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M.astype(float).tolist()


def model_to_dict(sys, provenance=None):
    n = sys.n
    doc = {
        "n": n,
        "E": _real_list(sys.E, "E"),
        "A": _real_list(sys.A, "A"),
    }
    if isinstance(sys, QBSystem):
        doc["Q"] = None if sys.Q is None else _real_list(sys.Q, "Q")
        doc["N"] = _real_list(sys.N, "N")
    doc["B"] = _real_list(np.reshape(sys.B, (n, 1)), "B")
    doc["C"] = _real_list(np.reshape(sys.C, (1, n)), "C")
    doc["symmetric"] = bool(getattr(sys, "symmetric", False))
    if provenance is None:
        provenance = getattr(sys, "provenance", "")
    doc["provenance"] = provenance
    return doc


def model_from_dict(doc):
    arr = {k: np.array(doc[k], dtype=float)
           for k in ("E", "A", "B", "C")}
    n = int(doc["n"])
    if arr["A"].shape != (n, n):
        raise ValueError(f"A has shape {arr['A'].shape}, header says n = {n}")
    if "N" not in doc:
        return LinearSystem(arr["E"], arr["A"], arr["B"], arr["C"])
    Q = doc.get("Q")
    Q = None if Q is None else np.array(Q, dtype=float)
    return QBSystem(arr["E"], arr["A"], Q, np.array(doc["N"], dtype=float),
                    arr["B"], arr["C"], symmetric=bool(doc.get("symmetric")),
                    provenance=doc.get("provenance", ""))


def save_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=False, allow_nan=False)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def save_model(path, sys, provenance=None):
    save_json(path, model_to_dict(sys, provenance))


def load_model(path):
    return model_from_dict(load_json(path))


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (int, np.integer)) else
                        FLOAT_FMT % v for v in row])


def _read_rows(path, header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got = [h.strip() for h in next(reader)]
        if got[:len(header)] != list(header):
            raise ValueError(f"{path}: expected columns {header}, got {got}")
        return np.array([[float(v) for v in row] for row in reader if row],
                        dtype=float).reshape(-1, len(got))


def write_h1_csv(path, samples):
    """Imaginary-axis H1 samples: ``im_s, re_H, im_H``."""
    rows = []
    for s, v in samples:
        if complex(s).real != 0:
            raise ValueError("H1 sample files hold imaginary-axis points only")
        rows.append((complex(s).imag, complex(v).real, complex(v).imag))
    _write_rows(path, ("im_s", "re_H", "im_H"), rows)


def read_h1_csv(path):
    data = _read_rows(path, ("im_s", "re_H", "im_H"))
    return [ComplexSample(1j * w, complex(re, im)) for w, re, im in data]


def write_h2_csv(path, samples):
    p, v = samples.pairs, samples.values
    rows = zip(p[:, 0].real, p[:, 0].imag, p[:, 1].real, p[:, 1].imag,
               v.real, v.imag)
    _write_rows(path, ("re_s1", "im_s1", "re_s2", "im_s2", "re_H2", "im_H2"),
                rows)


def read_h2_csv(path):
    d = _read_rows(path, ("re_s1", "im_s1", "re_s2", "im_s2", "re_H2",
                          "im_H2"))
    pairs = np.stack([d[:, 0] + 1j * d[:, 1], d[:, 2] + 1j * d[:, 3]], 1)
    return KernelSamples(pairs, d[:, 4] + 1j * d[:, 5])


def write_sigma_csv(path, sigma):
    sigma = np.asarray(sigma, dtype=float)
    rel = sigma / sigma[0] if sigma.size and sigma[0] > 0 else sigma
    _write_rows(path, ("index", "sigma", "sigma_rel"),
                ((i + 1, s, q) for i, (s, q) in enumerate(zip(sigma, rel))))


def write_trajectory_csv(path, traj, states=False):
    header = ["t", "y"]
    cols = [traj.t, traj.y]
    if states:
        if traj.x is None:
            raise ValueError("trajectory carries no states")
        header += [f"x_{i + 1}" for i in range(traj.x.shape[0])]
        cols += list(traj.x)
    _write_rows(path, header, zip(*cols))


def read_trajectory_csv(path):
    from .sim import Trajectory
    d = _read_rows(path, ("t", "y"))
    x = d[:, 2:].T if d.shape[1] > 2 else None
    return Trajectory(d[:, 0], d[:, 1], x)
