"""Scripted RC-ladder experiment: lift, fit H1, fit H2, simulate."""

from dataclasses import asdict, dataclass
import time

import numpy as np

from . import loewner, models, qbfit, sim
from .core import eval_H1, eval_H2
from .models import DiodeToyParams, LadderParams


@dataclass
class PipelineConfig:
    n: int = 50
    iS: float = 1.0
    uP: float = 40.0
    h1_count: int = 400
    h1_range: tuple = (-2.0, 1.0)
    m1: int = 24
    m2: int = 24
    h2_range: tuple = (-2.0, 1.0)
    loewner_tol: float = 1e-9
    rmax: int = None
    tsvd_tol: float = 1e-10
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    t_end: float = 10.0
    n_grid: int = sim.DEFAULT_NPTS
    input_spec: str = "expdecay:0.01,1"
    n_validation: int = 1000
    n_holdout: int = 200
    seed: int = 0

    def __post_init__(self):
        if min(self.h1_count, self.n_validation, self.n_holdout) <= 0:
            raise ValueError("sample counts must be positive")
        for lo, hi in (self.h1_range, self.h2_range):
            if not hi > lo:
                raise ValueError("frequency ranges need hi > lo")

    @property
    def params(self):
        return LadderParams(self.n, self.iS, self.uP)

    @property
    def integrator(self):
        return sim.IntegratorConfig(self.rel_tol, self.abs_tol,
                                    (0.0, self.t_end), n_grid=self.n_grid)


def params_from_dict(doc):
    """Build model parameters from ``{"model": "ladder"|"toy", ...}``."""
    doc = dict(doc)
    kind = doc.pop("model", "ladder")
    if kind == "ladder":
        return LadderParams(**{k: doc[k] for k in ("n", "iS", "uP")
                               if k in doc})
    if kind == "toy":
        return DiodeToyParams(**doc)
    raise ValueError(f"unknown model {kind!r}")


def reference_qb(params):
    if isinstance(params, LadderParams):
        return models.ladder_lifted_qb(params)
    return models.toy_lifted_qb(params)


def reference_nonlinear(params):
    if isinstance(params, LadderParams):
        return models.ladder_nonlinear(params)
    return models.toy_nonlinear(params)


def holdout_pairs(lo, hi, count, seed):
    """Log-uniform random pairs on the positive imaginary axis."""
    rng = np.random.default_rng(seed)
    return 1j * 10.0 ** rng.uniform(lo, hi, (count, 2))


def run_ladder_experiment(cfg=None, log=print):
    """Run all four ladder stages and return a JSON-ready report plus the
    fitted models."""
    cfg = cfg or PipelineConfig()
    p = cfg.params
    report = {"config": asdict(cfg)}
    truth = models.ladder_lifted_qb(p)
    nonlinear = models.ladder_nonlinear(p)
    u = sim.make_input(cfg.input_spec)
    icfg = cfg.integrator

    tic = time.perf_counter()
    y_nl = sim.integrate(nonlinear, u, cfg=icfg)
    y_qb = sim.integrate(truth, u, cfg=icfg)
    linf, l2 = sim.output_error(y_nl, y_qb)
    report["lifting"] = {"linf": linf, "l2": l2,
                         "seconds": time.perf_counter() - tic}
    log(f"lifting: |y_nl - y_qb|_inf = {linf:.3e}")

    tic = time.perf_counter()
    pts = loewner.imag_axis_samples(cfg.h1_count, *cfg.h1_range)
    h1 = loewner.sample_H1(truth, pts)
    lin, trunc = loewner.fit_linear(h1, cfg.loewner_tol, cfg.rmax)
    sigma = trunc.singular_values
    val = 1j * np.logspace(*cfg.h1_range, cfg.n_validation)
    h1_err = max(abs(eval_H1(truth, s) - eval_H1(lin, s)) for s in val)
    report["linear"] = {
        "r": trunc.r, "sigma_rel": (sigma / sigma[0]).tolist(),
        "h1_max_error": h1_err, "seconds": time.perf_counter() - tic}
    log(f"loewner: r = {trunc.r}, sigma_11/sigma_1 = "
        f"{sigma[10] / sigma[0]:.3e}, max |H1 - H1r| = {h1_err:.3e}")

    tic = time.perf_counter()
    pairs = qbfit.tensor_grid(cfg.m1, cfg.m2, *cfg.h2_range)
    kernel = qbfit.sample_H2(truth, pairs)
    fitted, diag = qbfit.fit_qb(lin, kernel, cfg.tsvd_tol,
                                return_diagnostics=True)
    hold = holdout_pairs(*cfg.h2_range, cfg.n_holdout, cfg.seed)
    h2_err = max(abs(eval_H2(truth, a, b) - eval_H2(fitted, a, b))
                 for a, b in hold)
    report["quadratic"] = {
        "K": kernel.K, "rank": diag["rank"],
        "residual_rel": diag["residual_rel"], "h2_max_error": h2_err,
        "seconds": time.perf_counter() - tic}
    log(f"qb fit: K = {kernel.K}, rank = {diag['rank']}, "
        f"held-out max |H2 - H2r| = {h2_err:.3e}")

    tic = time.perf_counter()
    y_fit = sim.integrate(fitted, u, cfg=icfg)
    linf, l2 = sim.output_error(y_nl, y_fit)
    report["surrogate"] = {"linf": linf, "l2": l2,
                           "seconds": time.perf_counter() - tic}
    log(f"surrogate: |y_nl - y_r|_inf = {linf:.3e}")
    artifacts = {"truth": truth, "linear": lin, "fitted": fitted,
                 "h1": h1, "kernel": kernel, "trunc": trunc,
                 "diagnostics": diag,
                 "trajectories": {"nonlinear": y_nl, "lifted": y_qb,
                                  "fitted": y_fit}}
    return report, artifacts
