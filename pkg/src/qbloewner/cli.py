"""Command-line interface.

Subcommands: ``sample``, ``fit-linear``, ``fit-qb``, ``lift``, ``simulate``,
``compare`` and ``repro-paper``. Failures exit with status 1 and print a JSON
object ``{"error": ..., "message": ...}`` on stderr.
"""

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import io, loewner, models, qbfit, sim
from .errors import InsufficientData, QBError
from .experiments import (PipelineConfig, params_from_dict, reference_nonlinear,
                          reference_qb, run_ladder_experiment)


def _params(args):
    doc = io.load_json(args.params) if args.params else {}
    if args.model:
        doc["model"] = args.model
    if getattr(args, "n", None) is not None:
        doc["n"] = args.n
    return params_from_dict(doc)


def _add_model_args(p):
    p.add_argument("--model", choices=["ladder", "toy"],
                   help="reference model (default: ladder)")
    p.add_argument("--params", help="JSON parameter file")
    p.add_argument("--n", type=int, help="number of ladder blocks")


def _add_sim_args(p):
    p.add_argument("--input", default="expdecay:0.01,1",
                   help="const:A | expdecay:A,tau | twotone:A,f1,f2")
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--npts", type=int, default=sim.DEFAULT_NPTS)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)


def _icfg(args):
    return sim.IntegratorConfig(args.rtol, args.atol, (0.0, args.t1),
                                n_grid=args.npts)


def _resolve_model(ref, args):
    """A JSON model path, or ``nonlinear:ladder`` / ``nonlinear:toy``."""
    if ref.startswith("nonlinear:"):
        ns = argparse.Namespace(model=ref.split(":", 1)[1],
                                params=args.params, n=args.n)
        return reference_nonlinear(_params(ns))
    return io.load_model(ref)


def _emit(doc):
    print(json.dumps(doc, indent=1))


def cmd_sample(args):
    p = _params(args)
    truth = reference_qb(p)
    os.makedirs(args.out, exist_ok=True)
    pts = loewner.imag_axis_samples(args.h1_count, *args.h1_range)
    io.write_h1_csv(os.path.join(args.out, "h1.csv"),
                    loewner.sample_H1(truth, pts))
    pairs = qbfit.tensor_grid(args.m1, args.m2, *args.h2_range)
    io.write_h2_csv(os.path.join(args.out, "h2.csv"),
                    qbfit.sample_H2(truth, pairs))
    _emit({"h1_samples": len(pts), "h2_samples": len(pairs),
           "out": args.out})


def cmd_fit_linear(args):
    samples = io.read_h1_csv(args.samples)
    lin, trunc = loewner.fit_linear(samples, args.tol, args.rmax,
                                    args.scheme, standard=not args.descriptor)
    os.makedirs(args.out, exist_ok=True)
    io.save_model(os.path.join(args.out, "linear.json"), lin,
                  provenance=f"loewner r={trunc.r}")
    io.write_sigma_csv(os.path.join(args.out, "singular_values.csv"),
                       trunc.singular_values)
    s = trunc.singular_values
    _emit({"r": trunc.r, "k": len(s),
           "sigma_rel": (s / s[0]).tolist()[:trunc.r + 1]})


def cmd_fit_qb(args):
    lin = io.load_model(args.linear)
    kernel = io.read_h2_csv(args.kernel)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InsufficientData)
        qb, diag = qbfit.fit_qb(lin, kernel, args.tol,
                                return_diagnostics=True)
    os.makedirs(args.out, exist_ok=True)
    io.save_model(os.path.join(args.out, "qb.json"), qb)
    io.save_json(os.path.join(args.out, "diagnostics.json"), diag)
    _emit({k: diag[k] for k in ("rank", "residual_rel", "K", "r",
                                "insufficient_data", "zero_data")})


def cmd_lift(args):
    p = _params(args)
    if isinstance(p, models.LadderParams):
        build = {"lifted": models.ladder_lifted_qb,
                 "carleman": models.ladder_carleman_bilinear}
    else:
        build = {"lifted": models.toy_lifted_qb,
                 "carleman": models.toy_carleman_bilinear,
                 "linearized": models.toy_linearized}
    if args.kind not in build:
        raise ValueError(f"no {args.kind!r} form for this model")
    sys_ = build[args.kind](p)
    io.save_model(args.out, sys_)
    _emit({"kind": args.kind, "n": sys_.n, "out": args.out})


def cmd_simulate(args):
    model = _resolve_model(args.model_ref, args)
    traj = sim.integrate(model, sim.make_input(args.input), cfg=_icfg(args),
                         keep_states=args.states)
    io.write_trajectory_csv(args.out, traj, states=args.states)
    _emit({"points": len(traj.t), "valid": traj.valid, "out": args.out})


def cmd_compare(args):
    u = sim.make_input(args.input)
    a = sim.integrate(_resolve_model(args.model_a, args), u, cfg=_icfg(args))
    b = sim.integrate(_resolve_model(args.model_b, args), u, cfg=_icfg(args))
    linf, l2 = sim.output_error(a, b)
    os.makedirs(args.out, exist_ok=True)
    io.write_trajectory_csv(os.path.join(args.out, "traj_a.csv"), a)
    io.write_trajectory_csv(os.path.join(args.out, "traj_b.csv"), b)
    report = {"linf": linf, "l2": l2, "valid": a.valid and b.valid}
    io.save_json(os.path.join(args.out, "report.json"), report)
    _emit(report)


def cmd_repro_paper(args):
    cfg = PipelineConfig(n=args.n, h1_count=args.h1_count, m1=args.m, m2=args.m)
    report, art = run_ladder_experiment(
        cfg, log=lambda msg: print(msg, file=sys.stderr))
    os.makedirs(args.out, exist_ok=True)
    io.save_model(os.path.join(args.out, "lifted_qb.json"), art["truth"])
    io.save_model(os.path.join(args.out, "linear.json"), art["linear"])
    io.save_model(os.path.join(args.out, "fitted_qb.json"), art["fitted"])
    io.write_h1_csv(os.path.join(args.out, "h1.csv"), art["h1"])
    io.write_h2_csv(os.path.join(args.out, "h2.csv"), art["kernel"])
    io.write_sigma_csv(os.path.join(args.out, "singular_values.csv"),
                       art["trunc"].singular_values)
    for name, traj in art["trajectories"].items():
        io.write_trajectory_csv(os.path.join(args.out, f"traj_{name}.csv"),
                                traj)
    io.save_json(os.path.join(args.out, "diagnostics.json"),
                 art["diagnostics"])
    io.save_json(os.path.join(args.out, "report.json"), report)
    _emit({k: v for k, v in report.items() if k != "config"})


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qbloewner",
        description="Fit quadratic-bilinear surrogates from H1/H2 samples.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample H1 and H2 of a reference model")
    _add_model_args(p)
    p.add_argument("--h1-count", type=int, default=400)
    p.add_argument("--h1-range", type=float, nargs=2, default=(-2.0, 1.0),
                   metavar=("LO", "HI"), help="decades of rad/s")
    p.add_argument("--m1", type=int, default=24)
    p.add_argument("--m2", type=int, default=24)
    p.add_argument("--h2-range", type=float, nargs=2, default=(-2.0, 1.0),
                   metavar=("LO", "HI"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit-linear", help="Loewner fit of the linear part")
    p.add_argument("samples")
    p.add_argument("--tol", type=float, default=loewner.DEFAULT_TOL)
    p.add_argument("--rmax", type=int)
    p.add_argument("--scheme", choices=["alternating", "half-split"],
                   default="alternating")
    p.add_argument("--descriptor", action="store_true",
                   help="keep the Loewner E instead of E = I")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_linear)

    p = sub.add_parser("fit-qb", help="least-squares fit of Q and N")
    p.add_argument("linear")
    p.add_argument("kernel")
    p.add_argument("--tol", type=float, default=qbfit.DEFAULT_TSVD_TOL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_qb)

    p = sub.add_parser("lift", help="write a lifted or Carleman model")
    _add_model_args(p)
    p.add_argument("--kind", choices=["lifted", "carleman", "linearized"],
                   default="lifted")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("simulate", help="simulate one model")
    p.add_argument("model_ref", metavar="MODEL",
                   help="model JSON or nonlinear:ladder / nonlinear:toy")
    p.add_argument("--params")
    p.add_argument("--n", type=int)
    _add_sim_args(p)
    p.add_argument("--states", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="simulate two models and compare")
    p.add_argument("model_a", metavar="MODEL_A")
    p.add_argument("model_b", metavar="MODEL_B")
    p.add_argument("--params")
    p.add_argument("--n", type=int)
    _add_sim_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("repro-paper", help="run the full RC-ladder experiment")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--h1-count", type=int, default=400)
    p.add_argument("--m", type=int, default=24, help="H2 grid is m x m")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_repro_paper)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (QBError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
